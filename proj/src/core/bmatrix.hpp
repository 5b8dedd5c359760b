// Matrices over q-th roots of unity in exponent encoding: the entry value
// e stands for zeta_q^e.  Verification of the Butson-Hadamard property is
// exact (no floating point anywhere).
#pragma once

#include <cstdint>
#include <vector>

#include "core/cyclo.hpp"

namespace butson {

class ExponentMatrix {
public:
    ExponentMatrix(unsigned q, unsigned n_rows, unsigned n_cols, int fill = 0);
    static ExponentMatrix from_rows(unsigned q, const std::vector<std::vector<int>>& rows);

    unsigned q() const { return q_; }
    unsigned n_rows() const { return rows_; }
    unsigned n_cols() const { return cols_; }

    int at(unsigned i, unsigned j) const;
    void set(unsigned i, unsigned j, int e);  // requires 0 <= e < q

    const int* row_ptr(unsigned i) const { return entries_.data() + static_cast<size_t>(i) * cols_; }
    const std::vector<int>& entries() const { return entries_; }

    ExponentMatrix submatrix(unsigned row0, unsigned col0, unsigned n_rows, unsigned n_cols) const;

    bool operator==(const ExponentMatrix& rhs) const = default;

private:
    unsigned q_, rows_, cols_;
    std::vector<int> entries_;  // row-major
};

// Hermitian inner product of rows i and k: sum over columns of
// zeta^(M[i,c] - M[k,c]).  Returned unreduced, as a count vector of
// exponent differences.
CycElem inner_product(const ExponentMatrix& m, unsigned i, unsigned k);
// Same for columns j and l (column j conjugated against column l).
CycElem inner_product_cols(const ExponentMatrix& m, unsigned j, unsigned l);

enum class Axis { row, col };

struct PairViolation {
    Axis axis;
    unsigned i, k;      // offending pair, i < k
    CycElem residual;   // the nonzero inner product
};

struct VerificationReport {
    bool is_hadamard = false;
    unsigned order = 0;
    unsigned q = 0;
    // All failing pairs, rows first then columns, each sorted by (i, k).
    std::vector<PairViolation> violations;
};

// Exact Butson-Hadamard test: every pair of distinct rows must be
// orthogonal.  Columns are checked independently as a self-test (for a
// square matrix over roots of unity the two are equivalent).  The report
// lists every failing pair.  Throws std::invalid_argument for non-square
// input.
VerificationReport verify_bh(const ExponentMatrix& m);

// Subtract the first row from every row, then the first column from every
// column (mod q).  The result has an all-zero first row and column and is
// Hadamard-equivalent to the input.  Requires a square matrix.
ExponentMatrix dephase(const ExponentMatrix& m);

// Conjugate transpose: out[i][j] = (q - m[j][i]) mod q.
ExponentMatrix conj_transpose(const ExponentMatrix& m);

// Hadamard-equivalence moves.  Permutations are given as images:
// row i of the output is row perm[i] of the input.
ExponentMatrix permute_rows(const ExponentMatrix& m, const std::vector<unsigned>& perm);
ExponentMatrix permute_cols(const ExponentMatrix& m, const std::vector<unsigned>& perm);
ExponentMatrix swap_rows(const ExponentMatrix& m, unsigned a, unsigned b);
ExponentMatrix swap_cols(const ExponentMatrix& m, unsigned a, unsigned b);
// Multiply a row/column by zeta_q^j (adds j to each exponent, mod q).
ExponentMatrix scale_row(const ExponentMatrix& m, unsigned i, unsigned j);
ExponentMatrix scale_col(const ExponentMatrix& m, unsigned c, unsigned j);

}  // namespace butson
