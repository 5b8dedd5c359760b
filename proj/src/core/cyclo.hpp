// Exact arithmetic in Z[zeta_q], the ring of integer combinations of q-th
// roots of unity.  Elements are stored as length-q integer coefficient
// vectors; zero tests and equality reduce modulo the q-th cyclotomic
// polynomial, so they are exact for every modulus q >= 1.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace butson {

using i64 = std::int64_t;

// Overflow-checked signed arithmetic.  All public operations detect
// overflow and throw std::overflow_error instead of wrapping.
i64 checked_add(i64 a, i64 b);
i64 checked_sub(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);

// Dense integer polynomial, coefficients lowest-degree first.  The zero
// polynomial has an empty coefficient vector; otherwise the leading
// coefficient is nonzero.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<i64> coeffs);

    static IntPoly monomial(unsigned degree, i64 coeff = 1);
    // x^q - 1
    static IntPoly x_pow_minus_one(unsigned q);

    bool is_zero() const { return coeffs_.empty(); }
    // Degree of the zero polynomial is -1.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    i64 coeff(unsigned i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
    const std::vector<i64>& coeffs() const { return coeffs_; }

    IntPoly operator+(const IntPoly& rhs) const;
    IntPoly operator-(const IntPoly& rhs) const;
    IntPoly operator*(const IntPoly& rhs) const;
    bool operator==(const IntPoly& rhs) const = default;

    // Quotient of an exact division; throws std::domain_error if the
    // divisor is zero or the remainder is nonzero.
    IntPoly divide_exact(const IntPoly& divisor) const;
    // Remainder modulo a monic divisor (exact over the integers).
    IntPoly mod_monic(const IntPoly& divisor) const;

    std::string to_string() const;

private:
    std::vector<i64> coeffs_;
};

// q-th cyclotomic polynomial Phi_q, computed by exact division of x^q - 1
// by the product of Phi_d over proper divisors d of q.
// Throws std::invalid_argument for q == 0.
IntPoly cyclotomic_poly(unsigned q);

// Per-modulus tables: Phi_q and the reduction of each power x^j modulo
// Phi_q.  Cached internally; safe to call from multiple threads.
struct CycloTable {
    unsigned q = 0;
    IntPoly phi;
    unsigned degree = 0;  // deg Phi_q = phi(q)
    // root_residue[j] = coefficients of x^j mod Phi_q, length `degree`
    std::vector<std::vector<i64>> root_residue;
    // largest |coefficient| over all root residues (pruning bound helper)
    i64 max_residue_coeff = 0;
};
const CycloTable& cyclo_table(unsigned q);

// Element of Z[zeta_q]: coeffs[j] is the integer multiplicity of zeta_q^j.
// The representation is not reduced; equality and zero tests reduce
// modulo Phi_q.  Value semantics throughout.
class CycElem {
public:
    explicit CycElem(unsigned q);            // zero element
    CycElem(unsigned q, std::vector<i64> coeffs);

    static CycElem root(unsigned q, unsigned j);   // zeta_q^j, 0 <= j < q
    static CycElem from_int(unsigned q, i64 value);

    unsigned q() const { return q_; }
    const std::vector<i64>& coeffs() const { return coeffs_; }

    // += multiplicity * zeta_q^j; hot-path accumulation helper
    CycElem& add_root(unsigned j, i64 multiplicity = 1);

    bool is_zero() const;
    // Coefficients of the canonical representative modulo Phi_q
    // (length phi(q), degree < phi(q)).
    std::vector<i64> canonical() const;

    CycElem operator+(const CycElem& rhs) const;
    CycElem operator-(const CycElem& rhs) const;
    CycElem operator-() const;
    CycElem operator*(i64 k) const;

    // Multiplication by zeta_q^j: cyclic shift of the coefficients.
    // Requires 0 <= j < q.
    CycElem mul_root(unsigned j) const;
    // Complex conjugate: coefficient of zeta^j moves to zeta^(q-j mod q).
    CycElem conj() const;

    // Exact division by a positive integer k: returns b with k*b == *this
    // (as complex numbers), or nullopt if some canonical coefficient is
    // not divisible by k.  Throws std::invalid_argument for k <= 0.
    std::optional<CycElem> div_exact(i64 k) const;

    // Equality modulo Phi_q.  Throws std::invalid_argument on modulus
    // mismatch, like every mixed-modulus operation.
    bool operator==(const CycElem& rhs) const;

    std::string to_string() const;  // raw coefficient vector, e.g. "[1 0 0 1 0 0]"

private:
    unsigned q_;
    std::vector<i64> coeffs_;
};

namespace detail {
// Ring product in Z[x]/(x^q - 1) (cyclic convolution).  Internal helper
// for Gram computations and norm checks; not part of the public surface.
CycElem cyc_mul(const CycElem& a, const CycElem& b);
}  // namespace detail

}  // namespace butson
