#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hbc/errors.hpp"
#include "hbc/rational.hpp"

namespace hbc {

// Coordinates live in the low bits of one 32-bit word. The length-doubling
// construction needs one spare row, so requests may use up to kMaxDim - 1 bits.
inline constexpr int kMaxDim = 24;

/// Vector over GF(2). Coordinate i (the coefficient of information bit x_i)
/// is stored at bit i; addition is coordinatewise XOR.
struct GF2Vector {
    uint32_t bits = 0;
    int dim = 0;

    GF2Vector() = default;
    GF2Vector(uint32_t b, int d) : bits(b), dim(d) {}

    bool is_zero() const { return bits == 0; }
    int coord(int i) const { return (bits >> i) & 1u; }
    int weight() const { return std::popcount(bits); }
    bool operator==(const GF2Vector& o) const { return bits == o.bits && dim == o.dim; }
    bool operator!=(const GF2Vector& o) const { return !(*this == o); }
};

inline GF2Vector vec_add(const GF2Vector& a, const GF2Vector& b) {
    require(a.dim == b.dim, ErrorKind::Input, "gf2: dimension mismatch in vector addition");
    return {a.bits ^ b.bits, a.dim};
}

inline GF2Vector operator+(const GF2Vector& a, const GF2Vector& b) { return vec_add(a, b); }

/// The unit vector with its single 1 at the last coordinate.
inline GF2Vector unit_last(int dim) {
    require(dim >= 1 && dim <= kMaxDim, ErrorKind::Input, "gf2: dimension out of range");
    return {1u << (dim - 1), dim};
}

/// Bit value at coordinate 0; several constructions steer this bit.
inline int first_coord(const GF2Vector& v) { return v.bits & 1u; }

inline bool valid_dim(int s) { return s >= 1 && s <= kMaxDim; }

/// True iff the columns are a permutation of all of F_2^s.
inline bool is_hg(const std::vector<GF2Vector>& cols, int s) {
    if (!valid_dim(s)) return false;
    size_t n = size_t{1} << s;
    if (cols.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (const auto& c : cols) {
        if (c.dim != s || c.bits >= n || seen[c.bits]) return false;
        seen[c.bits] = 1;
    }
    return true;
}

/// True iff every vector of F_2^s appears exactly twice among the columns.
inline bool is_double_hg(const std::vector<GF2Vector>& cols, int s) {
    if (!valid_dim(s)) return false;
    size_t n = size_t{1} << s;
    if (cols.size() != 2 * n) return false;
    std::vector<uint8_t> count(n, 0);
    for (const auto& c : cols) {
        if (c.dim != s || c.bits >= n) return false;
        if (++count[c.bits] > 2) return false;
    }
    return true;
}

/// Ordered sequence of 2^s columns forming a permutation of F_2^s. Columns
/// 2t and 2t+1 are the t-th pair. A value->index map is kept alongside the
/// columns so that shift partners resolve in O(1).
class HGMatrix {
public:
    HGMatrix() = default;

    HGMatrix(int s, std::vector<GF2Vector> cols) : dim_(s), cols_(std::move(cols)) {
        require(is_hg(cols_, s), ErrorKind::Input, "hgmatrix: columns are not a permutation of F_2^s");
        reindex();
    }

    int dim() const { return dim_; }
    int n() const { return static_cast<int>(cols_.size()); }
    int pairs() const { return n() / 2; }

    const GF2Vector& col(int i) const { return cols_[i]; }
    const std::vector<GF2Vector>& columns() const { return cols_; }

    GF2Vector pair_sum(int t) const { return cols_[2 * t] + cols_[2 * t + 1]; }

    std::vector<GF2Vector> pair_sums() const {
        std::vector<GF2Vector> out;
        out.reserve(pairs());
        for (int t = 0; t < pairs(); ++t) out.push_back(pair_sum(t));
        return out;
    }

    /// Index of the column holding the given value.
    int position_of(uint32_t bits) const { return pos_[bits]; }

    /// Index of the column holding col(i) + x.
    int shift_partner(int i, const GF2Vector& x) const { return pos_[cols_[i].bits ^ x.bits]; }

    void swap_cols(int i, int j) {
        if (i == j) return;
        std::swap(cols_[i], cols_[j]);
        pos_[cols_[i].bits] = i;
        pos_[cols_[j].bits] = j;
    }

    /// Adds x to every listed column, then repairs the value index. The
    /// result must again be duplicate-free; callers pass nodes of a good-path.
    void add_to_cols(const std::vector<int>& idxs, const GF2Vector& x) {
        for (int i : idxs) cols_[i].bits ^= x.bits;
        for (int i : idxs) pos_[cols_[i].bits] = i;
    }

    bool valid() const { return is_hg(cols_, dim_); }

private:
    void reindex() {
        pos_.assign(cols_.size(), -1);
        for (int i = 0; i < n(); ++i) pos_[cols_[i].bits] = i;
    }

    int dim_ = 0;
    std::vector<GF2Vector> cols_;
    std::vector<int32_t> pos_;
};

/// The matrix whose pairs all sum to e: column 2t holds the binary digits of
/// t in coordinates 0..s-2 with coordinate s-1 clear, column 2t+1 the same
/// with coordinate s-1 set.
inline HGMatrix canonical_hg(int s) {
    require(valid_dim(s), ErrorKind::Input, "canonical_hg: dimension out of range");
    uint32_t half = 1u << (s - 1);
    std::vector<GF2Vector> cols;
    cols.reserve(size_t{2} << (s - 1));
    for (uint32_t t = 0; t < half; ++t) {
        cols.emplace_back(t, s);
        cols.emplace_back(t | half, s);
    }
    return HGMatrix(s, std::move(cols));
}

/// HG-matrix whose pairs all sum to a fixed nonzero x: pairs are the cosets
/// {v, v+x} listed in increasing value order.
inline HGMatrix uniform_pairsum_hg(int s, const GF2Vector& x) {
    require(valid_dim(s) && x.dim == s && !x.is_zero(), ErrorKind::Input,
            "uniform_pairsum_hg: need a nonzero shift of matching dimension");
    uint32_t n = 1u << s;
    std::vector<GF2Vector> cols;
    cols.reserve(n);
    std::vector<char> used(n, 0);
    for (uint32_t v = 0; v < n; ++v) {
        if (used[v]) continue;
        used[v] = used[v ^ x.bits] = 1;
        cols.emplace_back(v, s);
        cols.emplace_back(v ^ x.bits, s);
    }
    return HGMatrix(s, std::move(cols));
}

/// Ordered multiset of k nonzero request vectors.
struct RequestBatch {
    int dim = 0;
    std::vector<GF2Vector> requests;

    int k() const { return static_cast<int>(requests.size()); }
    const GF2Vector& operator[](int i) const { return requests[i]; }

    bool single_kind() const {
        for (const auto& v : requests)
            if (v != requests.front()) return false;
        return true;
    }
};

inline RequestBatch make_request_batch(int s, std::vector<GF2Vector> reqs) {
    require(valid_dim(s), ErrorKind::Input, "requests: dimension out of range");
    for (const auto& v : reqs) {
        require(v.dim == s, ErrorKind::Input, "requests: dimension mismatch");
        require(!v.is_zero(), ErrorKind::Input, "requests: the all-zero request is rejected");
    }
    return RequestBatch{s, std::move(reqs)};
}

/// Partition of pair indices into good / bad / redundant roles. Only the bad
/// set and alpha are stored; the rest is forced.
struct TripleSet {
    int s = 0;
    Rational alpha{2, 3};
    std::vector<int> bad;  // sorted ascending

    int64_t half() const { return int64_t{1} << (s - 1); }
    int64_t bound() const { return alpha.floor_scale(half()); }  // |good| + |bad|

    std::vector<int> good() const {
        std::vector<int> g;
        for (int t = 0; t < bound(); ++t)
            if (!std::binary_search(bad.begin(), bad.end(), t)) g.push_back(t);
        return g;
    }

    std::vector<int> redundant() const {
        std::vector<int> r;
        for (int64_t t = bound(); t < half() - 1; ++t) r.push_back(static_cast<int>(t));
        return r;
    }
};

struct TripleMatrix {
    std::vector<GF2Vector> columns;
    TripleSet source;
};

/// Column t is v_t for good t, v_t + e for bad t, e for redundant t; the
/// final column is unconstrained and set to zero here.
inline TripleMatrix triple_matrix(const RequestBatch& M, const TripleSet& ts) {
    require(ts.s == M.dim, ErrorKind::Input, "triple_matrix: dimension mismatch");
    require(ts.bound() == M.k(), ErrorKind::Input, "triple_matrix: |good|+|bad| must equal k");
    for (int b : ts.bad)
        require(b >= 0 && b < M.k(), ErrorKind::Input, "triple_matrix: bad index out of range");
    GF2Vector e = unit_last(ts.s);
    TripleMatrix out;
    out.source = ts;
    out.columns.assign(ts.half(), GF2Vector{0, ts.s});
    for (int t = 0; t < M.k(); ++t) {
        bool is_bad = std::binary_search(ts.bad.begin(), ts.bad.end(), t);
        out.columns[t] = is_bad ? M[t] + e : M[t];
    }
    for (int64_t t = M.k(); t < ts.half() - 1; ++t) out.columns[t] = e;
    return out;
}

/// Elementary row operation: add row src to row dst. Self-inverse.
struct RowOp {
    int src = 0;
    int dst = 0;
};

inline void apply_row_op(GF2Vector& v, const RowOp& op) {
    if ((v.bits >> op.src) & 1u) v.bits ^= 1u << op.dst;
}

inline void apply_row_ops(GF2Vector& v, const std::vector<RowOp>& ops) {
    for (const auto& op : ops) apply_row_op(v, op);
}

/// Each op is its own inverse, so the inverse transform replays them backwards.
inline void apply_row_ops_inverse(GF2Vector& v, const std::vector<RowOp>& ops) {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) apply_row_op(v, *it);
}

struct RowReduction {
    std::vector<RowOp> ops;
    RequestBatch transformed;
};

/// Searches for row operations that turn row 0 of the request matrix into the
/// all-ones row. Equivalently: find c with <c, v_j> = 1 for every request,
/// then fold the rows named by c into row 0. Returns nullopt when no such
/// combination exists.
inline std::optional<RowReduction> row_ops_to_all_ones(const RequestBatch& M) {
    int s = M.dim;
    // Solve <c, v_j> = 1 for all j by elimination over the s unknowns.
    // Each equation is the request's bits plus an RHS bit at position s.
    std::vector<uint64_t> rows;
    rows.reserve(M.k());
    for (const auto& v : M.requests) rows.push_back(uint64_t{v.bits} | (uint64_t{1} << s));
    std::vector<uint64_t> pivots(s, 0);
    for (uint64_t r : rows) {
        for (int b = 0; b < s; ++b) {
            if (!((r >> b) & 1)) continue;
            if (pivots[b]) {
                r ^= pivots[b];
            } else {
                pivots[b] = r;
                r = 0;
                break;
            }
        }
        if (r != 0) return std::nullopt;  // reduced to 0 = 1
    }
    // Back-substitute with free variables set to zero.
    uint32_t c = 0;
    for (int b = s - 1; b >= 0; --b) {
        if (!pivots[b]) continue;
        uint64_t r = pivots[b];
        uint64_t val = (r >> s) & 1;
        for (int j = b + 1; j < s; ++j)
            if ((r >> j) & 1) val ^= (c >> j) & 1;
        if (val) c |= 1u << b;
    }
    if (c == 0) return std::nullopt;

    std::vector<RowOp> ops;
    if (!(c & 1u)) {
        // Row 0 itself is not in the combination: fold it into one member
        // first so that the member carries it, then sum everything into row 0.
        int star = std::countr_zero(c);
        ops.push_back({0, star});
    }
    for (int i = (c & 1u) ? 1 : 0; i < s; ++i)
        if ((c >> i) & 1u) ops.push_back({i, 0});

    RowReduction out;
    out.ops = ops;
    out.transformed = M;
    for (auto& v : out.transformed.requests) apply_row_ops(v, ops);
    for (const auto& v : out.transformed.requests)
        require(first_coord(v) == 1, ErrorKind::Internal, "row reduction: row 0 is not all ones");
    return out;
}

}  // namespace hbc
