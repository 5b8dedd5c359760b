// Petrescu block arrays: square matrices of order 3s+1 with layout
//
//     [ X  Y  T ]
//     [ Y  X  T ]
//     [ T* T* D ]
//
// where X, Y are s x s, T is s x (s+1) and D is (s+1) x (s+1), all in
// exponent encoding over q-th roots of unity.  The array is Hadamard
// exactly when the blocks satisfy a small system of Gram identities;
// both equivalent forms of that system are checked here, exactly.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core/bmatrix.hpp"

namespace butson {

struct PetrescuBlocks {
    unsigned s = 0;
    unsigned q = 0;
    ExponentMatrix X, Y, T, D;
};

// Matrix with entries in Z[zeta_q]; used for block products whose entries
// are sums of roots rather than single roots.
class CycMatrix {
public:
    CycMatrix(unsigned q, unsigned n_rows, unsigned n_cols);

    unsigned q() const { return q_; }
    unsigned n_rows() const { return rows_; }
    unsigned n_cols() const { return cols_; }

    const CycElem& at(unsigned i, unsigned j) const;
    CycElem& at(unsigned i, unsigned j);

    CycMatrix operator+(const CycMatrix& rhs) const;
    CycMatrix operator-() const;
    bool operator==(const CycMatrix& rhs) const;

private:
    unsigned q_, rows_, cols_;
    std::vector<CycElem> elems_;
};

// Exact block products in exponent encoding (B* is the conjugate
// transpose of B).
CycMatrix prod_a_bstar(const ExponentMatrix& a, const ExponentMatrix& b);  // A B*
CycMatrix gram_rows(const ExponentMatrix& a);                              // A A*
CycMatrix gram_cols(const ExponentMatrix& a);                              // A* A
CycMatrix prod_cyc_exp(const CycMatrix& s, const ExponentMatrix& b);       // S B
CycMatrix prod_cyc_expstar(const CycMatrix& s, const ExponentMatrix& b);   // S B*
CycMatrix roots_of(const ExponentMatrix& a);                               // entrywise zeta^a
CycMatrix sum_of_roots(const ExponentMatrix& x, const ExponentMatrix& y);  // zeta^x + zeta^y
CycMatrix gram_rows_cyc(const CycMatrix& e);                               // E E*

struct EntryViolation {
    unsigned i, j;
    CycElem residual;  // lhs entry minus target entry
};

struct EquationCheck {
    std::string name;
    bool passed = false;
    std::vector<EntryViolation> violations;  // sorted by (i, j)
};

struct BlockReport {
    bool passed = false;
    std::vector<EquationCheck> equations;
};

// Raised when a square matrix of order 3s+1 does not have the block
// structure above; names the first offending entry in row-major order.
class NotPetrescuForm : public std::runtime_error {
public:
    NotPetrescuForm(unsigned row, unsigned col, const std::string& detail);
    unsigned row() const { return row_; }
    unsigned col() const { return col_; }

private:
    unsigned row_, col_;
};

// Lay the blocks out as the order-3s+1 array.  Throws
// std::invalid_argument on dimension or modulus mismatches.
ExponentMatrix assemble(const PetrescuBlocks& blocks);

// Inverse of assemble, verifying the repeated-block structure.  Throws
// std::invalid_argument if the matrix is not square of order 3s+1 and
// NotPetrescuForm if any repeated block disagrees.
PetrescuBlocks extract_blocks(const ExponentMatrix& m, unsigned s);

// First equation system, checked exactly:
//   2 T*T + D D*       = (3s+1) I
//   X X* + Y Y* + T T* = (3s+1) I
//   (X+Y) T + T D*     = 0
//   X Y* + Y X* + T T* = 0
BlockReport check_system_a(const PetrescuBlocks& blocks);

// D-block conditions of the equivalent system:
//   D D* = (s-1) I + 2 J,   D* D = (s-1) I + 2 J,
//   all 2(s+1) line sums equal one common value (the DJ = JD condition).
BlockReport check_d(const ExponentMatrix& d, unsigned s);

// T-block Gram identities: T T* = (s+1) I and T*T = (s+1) I - J.
BlockReport check_t_gram(const ExponentMatrix& t, unsigned s);

// Gram identity for the X/Y split: (X-Y)(X-Y)* = (3s+1) I.
BlockReport check_difference(const ExponentMatrix& x, const ExponentMatrix& y, unsigned s);

// -(1/(s+1)) T D* T*, the exact value of X + Y as a matrix over
// Z[zeta_q].  If some entry is not divisible by s+1 the failing position
// is returned instead (a search prune, not an error).
struct DivisionFailure {
    unsigned i, j;
};
std::variant<CycMatrix, DivisionFailure> compute_x_plus_y(const ExponentMatrix& t, const ExponentMatrix& d,
                                                          unsigned s);

// All unordered pairs {a, b} with zeta^a + zeta^b equal to c, in
// lexicographic order with a <= b.  Brute force over the q(q+1)/2 pairs.
std::vector<std::pair<int, int>> decompose_pair_sum(const CycElem& c);

// Full structural audit of an order-3s+1 matrix: extracts the blocks
// (throwing like extract_blocks on shape problems) and runs both equation
// systems plus the consistency of X + Y with -(1/(s+1)) T D* T*.
BlockReport check_blocks(const ExponentMatrix& m, unsigned s);

}  // namespace butson
