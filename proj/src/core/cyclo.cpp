#include "core/cyclo.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace butson {

i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in add");
    return r;
}

i64 checked_sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in sub");
    return r;
}

i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in mul");
    return r;
}

namespace {

void strip_leading_zeros(std::vector<i64>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

}  // namespace

IntPoly::IntPoly(std::vector<i64> coeffs) : coeffs_(std::move(coeffs)) {
    strip_leading_zeros(coeffs_);
}

IntPoly IntPoly::monomial(unsigned degree, i64 coeff) {
    if (coeff == 0) return IntPoly();
    std::vector<i64> c(degree + 1, 0);
    c[degree] = coeff;
    return IntPoly(std::move(c));
}

IntPoly IntPoly::x_pow_minus_one(unsigned q) {
    if (q == 0) throw std::invalid_argument("x_pow_minus_one: q must be >= 1");
    std::vector<i64> c(q + 1, 0);
    c[0] = -1;
    c[q] = 1;
    return IntPoly(std::move(c));
}

IntPoly IntPoly::operator+(const IntPoly& rhs) const {
    std::vector<i64> c(std::max(coeffs_.size(), rhs.coeffs_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) c[i] = checked_add(coeff(static_cast<unsigned>(i)), rhs.coeff(static_cast<unsigned>(i)));
    return IntPoly(std::move(c));
}

IntPoly IntPoly::operator-(const IntPoly& rhs) const {
    std::vector<i64> c(std::max(coeffs_.size(), rhs.coeffs_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) c[i] = checked_sub(coeff(static_cast<unsigned>(i)), rhs.coeff(static_cast<unsigned>(i)));
    return IntPoly(std::move(c));
}

IntPoly IntPoly::operator*(const IntPoly& rhs) const {
    if (is_zero() || rhs.is_zero()) return IntPoly();
    std::vector<i64> c(coeffs_.size() + rhs.coeffs_.size() - 1, 0);
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < rhs.coeffs_.size(); ++j)
            c[i + j] = checked_add(c[i + j], checked_mul(coeffs_[i], rhs.coeffs_[j]));
    return IntPoly(std::move(c));
}

IntPoly IntPoly::divide_exact(const IntPoly& divisor) const {
    if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
    if (is_zero()) return IntPoly();
    if (degree() < divisor.degree()) throw std::domain_error("inexact polynomial division");
    std::vector<i64> rem = coeffs_;
    std::vector<i64> quot(static_cast<size_t>(degree() - divisor.degree()) + 1, 0);
    const i64 lead = divisor.coeffs().back();
    for (int d = degree(); d >= divisor.degree(); --d) {
        const i64 top = rem[static_cast<size_t>(d)];
        if (top == 0) continue;
        if (top % lead != 0) throw std::domain_error("inexact polynomial division");
        const i64 f = top / lead;
        const size_t shift = static_cast<size_t>(d - divisor.degree());
        quot[shift] = f;
        for (size_t i = 0; i < divisor.coeffs().size(); ++i)
            rem[shift + i] = checked_sub(rem[shift + i], checked_mul(f, divisor.coeffs()[i]));
    }
    for (i64 r : rem)
        if (r != 0) throw std::domain_error("inexact polynomial division");
    return IntPoly(std::move(quot));
}

IntPoly IntPoly::mod_monic(const IntPoly& divisor) const {
    if (divisor.is_zero() || divisor.coeffs().back() != 1)
        throw std::domain_error("mod_monic: divisor must be monic");
    std::vector<i64> rem = coeffs_;
    for (int d = degree(); d >= divisor.degree(); --d) {
        const i64 f = rem[static_cast<size_t>(d)];
        if (f == 0) continue;
        const size_t shift = static_cast<size_t>(d - divisor.degree());
        for (size_t i = 0; i < divisor.coeffs().size(); ++i)
            rem[shift + i] = checked_sub(rem[shift + i], checked_mul(f, divisor.coeffs()[i]));
    }
    if (divisor.degree() >= 0 && rem.size() > static_cast<size_t>(divisor.degree()))
        rem.resize(static_cast<size_t>(divisor.degree()));
    return IntPoly(std::move(rem));
}

std::string IntPoly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int d = degree(); d >= 0; --d) {
        const i64 c = coeffs_[static_cast<size_t>(d)];
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        const i64 a = c < 0 ? -c : c;
        if (a != 1 || d == 0) os << a;
        if (d > 0) {
            os << "x";
            if (d > 1) os << "^" << d;
        }
    }
    return os.str();
}

IntPoly cyclotomic_poly(unsigned q) {
    if (q == 0) throw std::invalid_argument("cyclotomic_poly: q must be >= 1");
    if (q == 1) return IntPoly({-1, 1});
    IntPoly divisor({1});
    for (unsigned d = 1; d < q; ++d)
        if (q % d == 0) divisor = divisor * cyclotomic_poly(d);
    return IntPoly::x_pow_minus_one(q).divide_exact(divisor);
}

namespace {

std::unique_ptr<CycloTable> build_table(unsigned q) {
    auto t = std::make_unique<CycloTable>();
    t->q = q;
    t->phi = cyclotomic_poly(q);
    t->degree = static_cast<unsigned>(t->phi.degree());
    t->root_residue.resize(q);
    for (unsigned j = 0; j < q; ++j) {
        IntPoly r = IntPoly::monomial(j).mod_monic(t->phi);
        std::vector<i64> row(t->degree, 0);
        for (unsigned i = 0; i < t->degree; ++i) row[i] = r.coeff(i);
        t->root_residue[j] = std::move(row);
        for (i64 c : t->root_residue[j]) {
            const i64 a = c < 0 ? -c : c;
            if (a > t->max_residue_coeff) t->max_residue_coeff = a;
        }
    }
    return t;
}

}  // namespace

const CycloTable& cyclo_table(unsigned q) {
    if (q == 0) throw std::invalid_argument("cyclo_table: q must be >= 1");
    static std::mutex mu;
    static std::map<unsigned, std::unique_ptr<CycloTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it == cache.end()) it = cache.emplace(q, build_table(q)).first;
    return *it->second;
}

CycElem::CycElem(unsigned q) : q_(q), coeffs_(q, 0) {
    if (q == 0) throw std::invalid_argument("CycElem: q must be >= 1");
}

CycElem::CycElem(unsigned q, std::vector<i64> coeffs) : q_(q), coeffs_(std::move(coeffs)) {
    if (q == 0) throw std::invalid_argument("CycElem: q must be >= 1");
    if (coeffs_.size() != q) throw std::invalid_argument("CycElem: coefficient vector must have length q");
}

CycElem CycElem::root(unsigned q, unsigned j) {
    CycElem e(q);
    return e.add_root(j), e;
}

CycElem CycElem::from_int(unsigned q, i64 value) {
    CycElem e(q);
    e.coeffs_[0] = value;
    return e;
}

CycElem& CycElem::add_root(unsigned j, i64 multiplicity) {
    if (j >= q_) throw std::invalid_argument("add_root: exponent out of range");
    coeffs_[j] = checked_add(coeffs_[j], multiplicity);
    return *this;
}

std::vector<i64> CycElem::canonical() const {
    const CycloTable& t = cyclo_table(q_);
    std::vector<i64> out(t.degree, 0);
    for (unsigned j = 0; j < q_; ++j) {
        const i64 c = coeffs_[j];
        if (c == 0) continue;
        const std::vector<i64>& row = t.root_residue[j];
        for (unsigned i = 0; i < t.degree; ++i)
            out[i] = checked_add(out[i], checked_mul(c, row[i]));
    }
    return out;
}

bool CycElem::is_zero() const {
    for (i64 c : canonical())
        if (c != 0) return false;
    return true;
}

CycElem CycElem::operator+(const CycElem& rhs) const {
    if (q_ != rhs.q_) throw std::invalid_argument("CycElem: modulus mismatch");
    CycElem out(q_);
    for (unsigned j = 0; j < q_; ++j) out.coeffs_[j] = checked_add(coeffs_[j], rhs.coeffs_[j]);
    return out;
}

CycElem CycElem::operator-(const CycElem& rhs) const {
    if (q_ != rhs.q_) throw std::invalid_argument("CycElem: modulus mismatch");
    CycElem out(q_);
    for (unsigned j = 0; j < q_; ++j) out.coeffs_[j] = checked_sub(coeffs_[j], rhs.coeffs_[j]);
    return out;
}

CycElem CycElem::operator-() const {
    CycElem out(q_);
    for (unsigned j = 0; j < q_; ++j) out.coeffs_[j] = checked_sub(0, coeffs_[j]);
    return out;
}

CycElem CycElem::operator*(i64 k) const {
    CycElem out(q_);
    for (unsigned j = 0; j < q_; ++j) out.coeffs_[j] = checked_mul(coeffs_[j], k);
    return out;
}

CycElem CycElem::mul_root(unsigned j) const {
    if (j >= q_) throw std::invalid_argument("mul_root: exponent out of range");
    CycElem out(q_);
    for (unsigned i = 0; i < q_; ++i) out.coeffs_[(i + j) % q_] = coeffs_[i];
    return out;
}

CycElem CycElem::conj() const {
    CycElem out(q_);
    for (unsigned i = 0; i < q_; ++i) out.coeffs_[(q_ - i) % q_] = coeffs_[i];
    return out;
}

std::optional<CycElem> CycElem::div_exact(i64 k) const {
    if (k <= 0) throw std::invalid_argument("div_exact: divisor must be positive");
    std::vector<i64> can = canonical();
    std::vector<i64> out(q_, 0);
    for (size_t i = 0; i < can.size(); ++i) {
        if (can[i] % k != 0) return std::nullopt;
        out[i] = can[i] / k;
    }
    return CycElem(q_, std::move(out));
}

bool CycElem::operator==(const CycElem& rhs) const {
    if (q_ != rhs.q_) throw std::invalid_argument("CycElem: modulus mismatch");
    return canonical() == rhs.canonical();
}

std::string CycElem::to_string() const {
    std::ostringstream os;
    os << "[";
    for (unsigned j = 0; j < q_; ++j) {
        if (j) os << " ";
        os << coeffs_[j];
    }
    os << "]";
    return os.str();
}

namespace detail {

CycElem cyc_mul(const CycElem& a, const CycElem& b) {
    if (a.q() != b.q()) throw std::invalid_argument("cyc_mul: modulus mismatch");
    const unsigned q = a.q();
    std::vector<i64> out(q, 0);
    for (unsigned i = 0; i < q; ++i) {
        if (a.coeffs()[i] == 0) continue;
        for (unsigned j = 0; j < q; ++j) {
            if (b.coeffs()[j] == 0) continue;
            const unsigned k = (i + j) % q;
            out[k] = checked_add(out[k], checked_mul(a.coeffs()[i], b.coeffs()[j]));
        }
    }
    return CycElem(q, std::move(out));
}

}  // namespace detail

}  // namespace butson
