#include "ccsr/formula.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace ccsr {

// ---------------------------------------------------------------------------
// Coalitions and universes
// ---------------------------------------------------------------------------

std::size_t Coalition::size() const { return static_cast<std::size_t>(std::popcount(bits)); }

std::vector<std::size_t> Coalition::members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 64; ++i)
        if (contains(i)) out.push_back(i);
    return out;
}

AgentUniverse::AgentUniverse(std::vector<std::string> agents) : agents_(std::move(agents)) {
    if (agents_.empty()) throw std::invalid_argument("agent universe must be nonempty");
    if (agents_.size() > 64) throw std::invalid_argument("at most 64 agents are supported");
    std::set<std::string> seen;
    for (const auto& a : agents_) {
        if (a.empty()) throw std::invalid_argument("empty agent name");
        if (!seen.insert(a).second) throw std::invalid_argument("duplicate agent '" + a + "'");
    }
}

std::optional<std::size_t> AgentUniverse::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < agents_.size(); ++i)
        if (agents_[i] == name) return i;
    return std::nullopt;
}

Coalition AgentUniverse::all() const {
    if (agents_.size() == 64) return Coalition{~std::uint64_t{0}};
    return Coalition{(std::uint64_t{1} << agents_.size()) - 1};
}

Coalition AgentUniverse::coalition(const std::vector<std::string>& names) const {
    Coalition c;
    for (const auto& n : names) {
        auto i = index_of(n);
        if (!i) throw std::invalid_argument("unknown agent '" + n + "'");
        c = c | Coalition::single(*i);
    }
    return c;
}

std::string AgentUniverse::format(Coalition c) const {
    if (c == all()) return "*";
    std::string out = "{";
    bool first = true;
    for (auto i : c.members()) {
        if (!first) out += ",";
        out += agents_.at(i);
        first = false;
    }
    return out + "}";
}

AgentUniverse parse_agents(std::string_view list) {
    std::vector<std::string> names;
    std::string cur;
    auto flush = [&] {
        auto b = cur.find_first_not_of(" \t");
        auto e = cur.find_last_not_of(" \t");
        names.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
        cur.clear();
    };
    for (char ch : list) {
        if (ch == ',')
            flush();
        else
            cur += ch;
    }
    flush();
    return AgentUniverse(std::move(names));
}

// ---------------------------------------------------------------------------
// Fragments
// ---------------------------------------------------------------------------

std::vector<Fragment> FragmentSet::list() const {
    std::vector<Fragment> out;
    for (auto f : {Fragment::CLn, Fragment::CLp, Fragment::CCSRn, Fragment::CCSRp})
        if (contains(f)) out.push_back(f);
    return out;
}

const char* fragment_name(Fragment f) {
    switch (f) {
        case Fragment::CLn: return "cln";
        case Fragment::CLp: return "clp";
        case Fragment::CCSRn: return "ccsrn";
        case Fragment::CCSRp: return "ccsrp";
    }
    return "?";
}

std::optional<Fragment> parse_fragment(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "cln") return Fragment::CLn;
    if (lower == "clp") return Fragment::CLp;
    if (lower == "ccsrn") return Fragment::CCSRn;
    if (lower == "ccsrp") return Fragment::CCSRp;
    return std::nullopt;
}

Fragment dual_fragment(Fragment f) {
    switch (f) {
        case Fragment::CLn: return Fragment::CLp;
        case Fragment::CLp: return Fragment::CLn;
        case Fragment::CCSRn: return Fragment::CCSRp;
        case Fragment::CCSRp: return Fragment::CCSRn;
    }
    return f;
}

bool is_negative(Fragment f) { return f == Fragment::CLn || f == Fragment::CCSRn; }
bool is_ccsr(Fragment f) { return f == Fragment::CCSRn || f == Fragment::CCSRp; }

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace {

std::string hex(Coalition c) {
    std::ostringstream os;
    os << std::hex << c.bits;
    return os.str();
}

Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

Formula make_modal(Kind kind, Coalition a, Formula phi, Coalition b, Formula psi) {
    Node n{kind, {}, std::move(phi), std::move(psi), a, b};
    int d = n.left->depth;
    if (n.right) d = std::max(d, n.right->depth);
    n.depth = d + 1;
    const bool positive = kind == Kind::Coop || kind == Kind::Can;
    const std::string& lk = n.left->key;
    const std::string& rk = n.right ? n.right->key : (positive ? top()->key : bottom()->key);
    if (positive)
        n.key = "<" + hex(a) + ":" + lk + ";" + hex(b) + ":" + rk + ">";
    else
        n.key = "[" + hex(a) + ":" + lk + ";" + hex(b) + ":" + rk + "]";
    FragmentSet own{};
    switch (kind) {
        case Kind::Can: own = FragmentSet::of(Fragment::CLp); break;
        case Kind::DualCan: own = FragmentSet::of(Fragment::CLn); break;
        case Kind::Coop: own = FragmentSet::of(Fragment::CCSRp); break;
        default: own = FragmentSet::of(Fragment::CCSRn); break;
    }
    own = own & n.left->fragments;
    if (n.right) own = own & n.right->fragments;
    n.fragments = own;
    return make(std::move(n));
}

}  // namespace

Formula top() {
    static const Formula t = make(Node{Kind::Top, {}, nullptr, nullptr, {}, {}, 0, FragmentSet::all(), "T"});
    return t;
}

Formula bottom() {
    static const Formula f = make(Node{Kind::Bottom, {}, nullptr, nullptr, {}, {}, 0, FragmentSet::all(), "F"});
    return f;
}

Formula atom(std::string name) {
    std::string key = "+" + name;
    return make(Node{Kind::Atom, std::move(name), nullptr, nullptr, {}, {}, 0, FragmentSet::all(), std::move(key)});
}

Formula neg_atom(std::string name) {
    std::string key = "-" + name;
    return make(Node{Kind::NegAtom, std::move(name), nullptr, nullptr, {}, {}, 0, FragmentSet::all(), std::move(key)});
}

Formula conj(Formula l, Formula r) {
    Node n{Kind::And, {}, std::move(l), std::move(r)};
    n.depth = std::max(n.left->depth, n.right->depth);
    n.fragments = n.left->fragments & n.right->fragments;
    n.key = "(&" + n.left->key + "," + n.right->key + ")";
    return make(std::move(n));
}

Formula disj(Formula l, Formula r) {
    Node n{Kind::Or, {}, std::move(l), std::move(r)};
    n.depth = std::max(n.left->depth, n.right->depth);
    n.fragments = n.left->fragments & n.right->fragments;
    n.key = "(|" + n.left->key + "," + n.right->key + ")";
    return make(std::move(n));
}

Formula coop(Coalition a, Formula phi, Coalition b, Formula psi) {
    return make_modal(Kind::Coop, a, std::move(phi), b, std::move(psi));
}
Formula dual_coop(Coalition a, Formula phi, Coalition b, Formula psi) {
    return make_modal(Kind::DualCoop, a, std::move(phi), b, std::move(psi));
}
Formula can(Coalition a, Formula phi) { return make_modal(Kind::Can, a, std::move(phi), {}, nullptr); }
Formula dual_can(Coalition a, Formula phi) { return make_modal(Kind::DualCan, a, std::move(phi), {}, nullptr); }

Formula disj_all(const std::vector<Formula>& items) {
    if (items.empty()) return bottom();
    Formula acc = items.front();
    for (std::size_t i = 1; i < items.size(); ++i) acc = disj(acc, items[i]);
    return acc;
}

Formula conj_all(const std::vector<Formula>& items) {
    if (items.empty()) return top();
    Formula acc = items.front();
    for (std::size_t i = 1; i < items.size(); ++i) acc = conj(acc, items[i]);
    return acc;
}

Coalition coalition_b(const Formula& f) { return f->b; }
Formula goal_a(const Formula& f) { return f->left; }
Formula goal_b(const Formula& f) {
    if (f->right) return f->right;
    return f->kind == Kind::Can ? top() : bottom();
}

bool canonically_equal(const Formula& x, const Formula& y) { return x == y || x->key == y->key; }

bool structurally_equal(const Formula& x, const Formula& y) {
    if (x == y) return true;
    if (x->kind != y->kind || x->name != y->name || x->a != y->a || x->b != y->b) return false;
    if (static_cast<bool>(x->left) != static_cast<bool>(y->left)) return false;
    if (static_cast<bool>(x->right) != static_cast<bool>(y->right)) return false;
    if (x->left && !structurally_equal(x->left, y->left)) return false;
    if (x->right && !structurally_equal(x->right, y->right)) return false;
    return true;
}

int modal_depth(const Formula& f) { return f->depth; }
FragmentSet fragment_of(const Formula& f) { return f->fragments; }

Formula desugar(const Formula& f) {
    switch (f->kind) {
        case Kind::And: {
            auto l = desugar(f->left), r = desugar(f->right);
            return (l == f->left && r == f->right) ? f : conj(l, r);
        }
        case Kind::Or: {
            auto l = desugar(f->left), r = desugar(f->right);
            return (l == f->left && r == f->right) ? f : disj(l, r);
        }
        case Kind::Can: return coop(f->a, desugar(f->left), {}, top());
        case Kind::DualCan: return dual_coop(f->a, desugar(f->left), {}, bottom());
        case Kind::Coop: case Kind::DualCoop: {
            auto l = desugar(f->left), r = desugar(f->right);
            if (l == f->left && r == f->right) return f;
            return f->kind == Kind::Coop ? coop(f->a, l, f->b, r) : dual_coop(f->a, l, f->b, r);
        }
        default: return f;
    }
}

bool admits(Fragment frag, const Formula& f) {
    if (fragment_of(f).contains(frag)) return true;
    return is_ccsr(frag) && fragment_of(desugar(f)).contains(frag);
}

namespace {

Formula dualize_rec(const Formula& f) {
    switch (f->kind) {
        case Kind::Top: return bottom();
        case Kind::Bottom: return top();
        case Kind::Atom: return neg_atom(f->name);
        case Kind::NegAtom: return atom(f->name);
        case Kind::And: return disj(dualize_rec(f->left), dualize_rec(f->right));
        case Kind::Or: return conj(dualize_rec(f->left), dualize_rec(f->right));
        case Kind::Can: return dual_can(f->a, dualize_rec(f->left));
        case Kind::DualCan: return can(f->a, dualize_rec(f->left));
        case Kind::Coop: return dual_coop(f->a, dualize_rec(f->left), f->b, dualize_rec(f->right));
        case Kind::DualCoop: return coop(f->a, dualize_rec(f->left), f->b, dualize_rec(f->right));
    }
    return f;
}

}  // namespace

Formula dualize(const Formula& f) {
    if (fragment_of(f).empty() && fragment_of(desugar(f)).empty())
        throw FragmentError("dualize: formula mixes modalities and lies in no fragment");
    return dualize_rec(f);
}

std::vector<std::string> atoms_of(const Formula& f) {
    std::set<std::string> acc;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (!g) return;
        if (g->kind == Kind::Atom || g->kind == Kind::NegAtom) acc.insert(g->name);
        walk(g->left);
        walk(g->right);
    };
    walk(f);
    return {acc.begin(), acc.end()};
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error("syntax error at position " + std::to_string(pos) + ": " + msg), pos_(pos) {}

namespace {

class Parser {
public:
    Parser(std::string_view text, const AgentUniverse& u) : text_(text), u_(u) {}

    Formula run() {
        auto f = parse_or();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return f;
    }

private:
    std::string_view text_;
    const AgentUniverse& u_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    std::string ident() {
        skip_ws();
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected identifier");
        auto start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Formula parse_or() {
        auto f = parse_and();
        while (accept('|')) f = disj(f, parse_and());
        return f;
    }

    Formula parse_and() {
        auto f = parse_unary();
        while (accept('&')) f = conj(f, parse_unary());
        return f;
    }

    Coalition parse_coalition() {
        if (accept('*')) return u_.all();
        expect('{');
        Coalition c;
        if (accept('}')) return c;
        do {
            skip_ws();
            auto at = pos_;
            auto name = ident();
            auto idx = u_.index_of(name);
            if (!idx) throw ParseError("unknown agent '" + name + "'", at);
            c = c | Coalition::single(*idx);
        } while (accept(','));
        expect('}');
        return c;
    }

    Formula parse_modal(bool positive) {
        const char close = positive ? '>' : ']';
        auto a = parse_coalition();
        if (accept(close)) {
            auto goal = parse_unary();
            return positive ? can(a, goal) : dual_can(a, goal);
        }
        expect(':');
        auto phi = parse_or();
        expect(';');
        auto b = parse_coalition();
        expect(':');
        auto psi = parse_or();
        expect(close);
        return positive ? coop(a, phi, b, psi) : dual_coop(a, phi, b, psi);
    }

    Formula parse_unary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto f = parse_or();
            expect(')');
            return f;
        }
        if (c == '~') {
            ++pos_;
            skip_ws();
            auto at = pos_;
            auto name = ident();
            if (name == "true" || name == "false") throw ParseError("negation applies to atoms only", at);
            return neg_atom(name);
        }
        if (c == '<') {
            ++pos_;
            return parse_modal(true);
        }
        if (c == '[') {
            ++pos_;
            return parse_modal(false);
        }
        if (ident_start(c)) {
            auto name = ident();
            if (name == "true") return top();
            if (name == "false") return bottom();
            return atom(name);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

Formula parse(std::string_view text, const AgentUniverse& universe) { return Parser(text, universe).run(); }

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

void emit(std::string& out, const Formula& f, const AgentUniverse& u);

void emit_wrapped(std::string& out, const Formula& f, const AgentUniverse& u, bool wrap) {
    if (wrap) out += "(";
    emit(out, f, u);
    if (wrap) out += ")";
}

bool is_binary(const Formula& f) { return f->kind == Kind::And || f->kind == Kind::Or; }

void emit(std::string& out, const Formula& f, const AgentUniverse& u) {
    switch (f->kind) {
        case Kind::Top: out += "true"; return;
        case Kind::Bottom: out += "false"; return;
        case Kind::Atom: out += f->name; return;
        case Kind::NegAtom: out += "~" + f->name; return;
        case Kind::Or:
            emit(out, f->left, u);
            out += " | ";
            emit_wrapped(out, f->right, u, f->right->kind == Kind::Or);
            return;
        case Kind::And:
            emit_wrapped(out, f->left, u, f->left->kind == Kind::Or);
            out += " & ";
            emit_wrapped(out, f->right, u, is_binary(f->right));
            return;
        case Kind::Can: case Kind::DualCan: {
            const bool pos = f->kind == Kind::Can;
            out += pos ? "<" : "[";
            out += u.format(f->a);
            out += pos ? ">" : "]";
            emit_wrapped(out, f->left, u, is_binary(f->left));
            return;
        }
        case Kind::Coop: case Kind::DualCoop: {
            const bool pos = f->kind == Kind::Coop;
            out += pos ? "<" : "[";
            out += u.format(f->a) + ":";
            emit(out, f->left, u);
            out += ";" + u.format(f->b) + ":";
            emit(out, f->right, u);
            out += pos ? ">" : "]";
            return;
        }
    }
}

}  // namespace

std::string print(const Formula& f, const AgentUniverse& universe) {
    std::string out;
    emit(out, f, universe);
    return out;
}

}  // namespace ccsr
