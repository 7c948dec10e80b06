#include "ccsr/taut.hpp"

#include <cstdint>

namespace ccsr {

int Skeleton::constant(bool value) {
    nodes_.push_back({value ? Op::True : Op::False});
    return static_cast<int>(nodes_.size()) - 1;
}

int Skeleton::var(int v) {
    vars_ = std::max(vars_, v + 1);
    nodes_.push_back({Op::Var, v});
    return static_cast<int>(nodes_.size()) - 1;
}

int Skeleton::negate(int x) {
    nodes_.push_back({Op::Not, x});
    return static_cast<int>(nodes_.size()) - 1;
}

int Skeleton::both(int x, int y) {
    nodes_.push_back({Op::And, x, y});
    return static_cast<int>(nodes_.size()) - 1;
}

int Skeleton::either(int x, int y) {
    nodes_.push_back({Op::Or, x, y});
    return static_cast<int>(nodes_.size()) - 1;
}

int Abstraction::variable(const std::string& id, const Formula& src) {
    auto it = ids_.find(id);
    if (it != ids_.end()) return it->second;
    int v = static_cast<int>(labels_.size());
    ids_.emplace(id, v);
    labels_.push_back(id);
    sources_.push_back(src);
    return v;
}

int Abstraction::encode(Skeleton& sk, const Formula& f) {
    switch (f->kind) {
        case Kind::Top: return sk.constant(true);
        case Kind::Bottom: return sk.constant(false);
        case Kind::Atom: return sk.var(variable("+" + f->name, f));
        case Kind::NegAtom: return sk.negate(sk.var(variable("+" + f->name, atom(f->name))));
        case Kind::And: {
            int l = encode(sk, f->left);
            return sk.both(l, encode(sk, f->right));
        }
        case Kind::Or: {
            int l = encode(sk, f->left);
            return sk.either(l, encode(sk, f->right));
        }
        default: return sk.var(variable(f->key, f));
    }
}

namespace {

using Op = Skeleton::Op;

std::optional<std::vector<bool>> table_search(const Skeleton& sk, int root) {
    const int n = sk.var_count();
    const std::uint64_t rows = std::uint64_t{1} << n;
    const std::size_t words = rows < 64 ? 1 : static_cast<std::size_t>(rows / 64);
    const std::uint64_t last_mask = rows < 64 ? ((std::uint64_t{1} << rows) - 1) : ~std::uint64_t{0};
    static constexpr std::uint64_t low_patterns[6] = {
        0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
        0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
    const auto& nodes = sk.entries();
    std::vector<std::vector<std::uint64_t>> val(static_cast<std::size_t>(root) + 1);
    for (int i = 0; i <= root; ++i) {
        auto& out = val[i];
        out.resize(words);
        const auto& e = nodes[i];
        switch (e.op) {
            case Op::False: break;
            case Op::True: std::fill(out.begin(), out.end(), ~std::uint64_t{0}); break;
            case Op::Var:
                for (std::size_t w = 0; w < words; ++w)
                    out[w] = e.x < 6 ? low_patterns[e.x] : (((w >> (e.x - 6)) & 1U) ? ~std::uint64_t{0} : 0);
                break;
            case Op::Not:
                for (std::size_t w = 0; w < words; ++w) out[w] = ~val[e.x][w];
                break;
            case Op::And:
                for (std::size_t w = 0; w < words; ++w) out[w] = val[e.x][w] & val[e.y][w];
                break;
            case Op::Or:
                for (std::size_t w = 0; w < words; ++w) out[w] = val[e.x][w] | val[e.y][w];
                break;
        }
    }
    const auto& res = val[root];
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t zeros = ~res[w] & (w + 1 == words ? last_mask : ~std::uint64_t{0});
        if (!zeros) continue;
        std::uint64_t row = w * 64 + static_cast<std::uint64_t>(__builtin_ctzll(zeros));
        std::vector<bool> assignment(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) assignment[v] = (row >> v) & 1U;
        return assignment;
    }
    return std::nullopt;
}

// Three-valued evaluation under a partial assignment: 0 false, 1 true, 2 open.
int eval3(const Skeleton& sk, int root, const std::vector<signed char>& assign, std::vector<signed char>& memo) {
    const auto& nodes = sk.entries();
    for (int i = 0; i <= root; ++i) {
        const auto& e = nodes[i];
        switch (e.op) {
            case Op::False: memo[i] = 0; break;
            case Op::True: memo[i] = 1; break;
            case Op::Var: memo[i] = assign[e.x] < 0 ? 2 : assign[e.x]; break;
            case Op::Not: memo[i] = memo[e.x] == 2 ? 2 : 1 - memo[e.x]; break;
            case Op::And: {
                int l = memo[e.x], r = memo[e.y];
                memo[i] = (l == 0 || r == 0) ? 0 : (l == 1 && r == 1) ? 1 : 2;
                break;
            }
            case Op::Or: {
                int l = memo[e.x], r = memo[e.y];
                memo[i] = (l == 1 || r == 1) ? 1 : (l == 0 && r == 0) ? 0 : 2;
                break;
            }
        }
    }
    return memo[root];
}

bool split_search(const Skeleton& sk, int root, std::vector<signed char>& assign, std::vector<signed char>& memo) {
    int v = eval3(sk, root, assign, memo);
    if (v == 0) return true;
    if (v == 1) return false;
    // Branch on the first open variable that still matters.
    const auto& nodes = sk.entries();
    int pick = -1;
    for (int i = 0; i <= root && pick < 0; ++i)
        if (nodes[i].op == Op::Var && assign[nodes[i].x] < 0) pick = nodes[i].x;
    for (signed char value : {0, 1}) {
        assign[pick] = value;
        if (split_search(sk, root, assign, memo)) return true;
    }
    assign[pick] = -1;
    return false;
}

}  // namespace

std::optional<std::vector<bool>> falsifying_assignment(const Skeleton& sk, int root) {
    if (sk.var_count() < kTruthTableLimit) return table_search(sk, root);
    std::vector<signed char> assign(static_cast<std::size_t>(sk.var_count()), -1);
    std::vector<signed char> memo(static_cast<std::size_t>(root) + 1);
    if (!split_search(sk, root, assign, memo)) return std::nullopt;
    std::vector<bool> out(assign.size());
    for (std::size_t i = 0; i < assign.size(); ++i) out[i] = assign[i] == 1;
    return out;
}

bool taut(const Skeleton& sk, int root) { return !falsifying_assignment(sk, root).has_value(); }

bool is_tautology(const Formula& f) {
    Skeleton sk;
    Abstraction abs;
    int root = abs.encode(sk, f);
    return taut(sk, root);
}

bool implies_tautologically(const std::vector<Formula>& premises, const Formula& conclusion) {
    Skeleton sk;
    Abstraction abs;
    int lhs = sk.constant(true);
    for (const auto& p : premises) lhs = sk.both(lhs, abs.encode(sk, p));
    int rhs = abs.encode(sk, conclusion);
    return taut(sk, sk.implies(lhs, rhs));
}

std::optional<std::set<std::string>> satisfying_atoms(const Formula& f) {
    if (modal_depth(f) != 0) throw std::invalid_argument("satisfying_atoms expects a modal-free formula");
    Skeleton sk;
    Abstraction abs;
    int root = sk.negate(abs.encode(sk, f));
    auto falsifier = falsifying_assignment(sk, root);
    if (!falsifier) return std::nullopt;
    std::set<std::string> out;
    for (std::size_t v = 0; v < abs.size(); ++v)
        if ((*falsifier)[v]) out.insert(abs.sources()[v]->name);
    return out;
}

}  // namespace ccsr
