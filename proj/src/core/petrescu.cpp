#include "core/petrescu.hpp"

namespace butson {

CycMatrix::CycMatrix(unsigned q, unsigned n_rows, unsigned n_cols)
    : q_(q), rows_(n_rows), cols_(n_cols), elems_(static_cast<size_t>(n_rows) * n_cols, CycElem(q)) {
    if (n_rows == 0 || n_cols == 0) throw std::invalid_argument("CycMatrix: empty dimensions");
}

const CycElem& CycMatrix::at(unsigned i, unsigned j) const {
    if (i >= rows_ || j >= cols_) throw std::invalid_argument("CycMatrix: index out of range");
    return elems_[static_cast<size_t>(i) * cols_ + j];
}

CycElem& CycMatrix::at(unsigned i, unsigned j) {
    if (i >= rows_ || j >= cols_) throw std::invalid_argument("CycMatrix: index out of range");
    return elems_[static_cast<size_t>(i) * cols_ + j];
}

CycMatrix CycMatrix::operator+(const CycMatrix& rhs) const {
    if (q_ != rhs.q_ || rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("CycMatrix: shape or modulus mismatch");
    CycMatrix out(q_, rows_, cols_);
    for (size_t i = 0; i < elems_.size(); ++i) out.elems_[i] = elems_[i] + rhs.elems_[i];
    return out;
}

CycMatrix CycMatrix::operator-() const {
    CycMatrix out(q_, rows_, cols_);
    for (size_t i = 0; i < elems_.size(); ++i) out.elems_[i] = -elems_[i];
    return out;
}

bool CycMatrix::operator==(const CycMatrix& rhs) const {
    if (q_ != rhs.q_ || rows_ != rhs.rows_ || cols_ != rhs.cols_) return false;
    for (size_t i = 0; i < elems_.size(); ++i)
        if (!(elems_[i] == rhs.elems_[i])) return false;
    return true;
}

namespace {

unsigned mod_q(int v, unsigned q) {
    const int m = v % static_cast<int>(q);
    return static_cast<unsigned>(m < 0 ? m + static_cast<int>(q) : m);
}

void require_same_q(unsigned a, unsigned b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": modulus mismatch");
}

}  // namespace

CycMatrix prod_a_bstar(const ExponentMatrix& a, const ExponentMatrix& b) {
    require_same_q(a.q(), b.q(), "prod_a_bstar");
    if (a.n_cols() != b.n_cols()) throw std::invalid_argument("prod_a_bstar: inner dimension mismatch");
    const unsigned q = a.q();
    CycMatrix out(q, a.n_rows(), b.n_rows());
    for (unsigned i = 0; i < a.n_rows(); ++i)
        for (unsigned j = 0; j < b.n_rows(); ++j) {
            CycElem& e = out.at(i, j);
            for (unsigned c = 0; c < a.n_cols(); ++c)
                e.add_root(mod_q(a.at(i, c) - b.at(j, c), q));
        }
    return out;
}

CycMatrix gram_rows(const ExponentMatrix& a) { return prod_a_bstar(a, a); }

CycMatrix gram_cols(const ExponentMatrix& a) {
    const unsigned q = a.q();
    CycMatrix out(q, a.n_cols(), a.n_cols());
    for (unsigned i = 0; i < a.n_cols(); ++i)
        for (unsigned j = 0; j < a.n_cols(); ++j) {
            CycElem& e = out.at(i, j);
            for (unsigned r = 0; r < a.n_rows(); ++r)
                e.add_root(mod_q(a.at(r, j) - a.at(r, i), q));
        }
    return out;
}

CycMatrix prod_cyc_exp(const CycMatrix& s, const ExponentMatrix& b) {
    require_same_q(s.q(), b.q(), "prod_cyc_exp");
    if (s.n_cols() != b.n_rows()) throw std::invalid_argument("prod_cyc_exp: inner dimension mismatch");
    CycMatrix out(s.q(), s.n_rows(), b.n_cols());
    for (unsigned i = 0; i < s.n_rows(); ++i)
        for (unsigned j = 0; j < b.n_cols(); ++j) {
            CycElem acc(s.q());
            for (unsigned c = 0; c < s.n_cols(); ++c)
                acc = acc + s.at(i, c).mul_root(static_cast<unsigned>(b.at(c, j)));
            out.at(i, j) = std::move(acc);
        }
    return out;
}

CycMatrix prod_cyc_expstar(const CycMatrix& s, const ExponentMatrix& b) {
    require_same_q(s.q(), b.q(), "prod_cyc_expstar");
    if (s.n_cols() != b.n_cols()) throw std::invalid_argument("prod_cyc_expstar: inner dimension mismatch");
    const unsigned q = s.q();
    CycMatrix out(q, s.n_rows(), b.n_rows());
    for (unsigned i = 0; i < s.n_rows(); ++i)
        for (unsigned j = 0; j < b.n_rows(); ++j) {
            CycElem acc(q);
            for (unsigned c = 0; c < s.n_cols(); ++c)
                acc = acc + s.at(i, c).mul_root(mod_q(-b.at(j, c), q));
            out.at(i, j) = std::move(acc);
        }
    return out;
}

CycMatrix roots_of(const ExponentMatrix& a) {
    CycMatrix out(a.q(), a.n_rows(), a.n_cols());
    for (unsigned i = 0; i < a.n_rows(); ++i)
        for (unsigned j = 0; j < a.n_cols(); ++j)
            out.at(i, j).add_root(static_cast<unsigned>(a.at(i, j)));
    return out;
}

CycMatrix sum_of_roots(const ExponentMatrix& x, const ExponentMatrix& y) {
    require_same_q(x.q(), y.q(), "sum_of_roots");
    if (x.n_rows() != y.n_rows() || x.n_cols() != y.n_cols())
        throw std::invalid_argument("sum_of_roots: shape mismatch");
    CycMatrix out(x.q(), x.n_rows(), x.n_cols());
    for (unsigned i = 0; i < x.n_rows(); ++i)
        for (unsigned j = 0; j < x.n_cols(); ++j) {
            out.at(i, j).add_root(static_cast<unsigned>(x.at(i, j)));
            out.at(i, j).add_root(static_cast<unsigned>(y.at(i, j)));
        }
    return out;
}

CycMatrix gram_rows_cyc(const CycMatrix& e) {
    CycMatrix out(e.q(), e.n_rows(), e.n_rows());
    for (unsigned i = 0; i < e.n_rows(); ++i)
        for (unsigned k = 0; k < e.n_rows(); ++k) {
            CycElem acc(e.q());
            for (unsigned c = 0; c < e.n_cols(); ++c)
                acc = acc + detail::cyc_mul(e.at(i, c), e.at(k, c).conj());
            out.at(i, k) = std::move(acc);
        }
    return out;
}

NotPetrescuForm::NotPetrescuForm(unsigned row, unsigned col, const std::string& detail)
    : std::runtime_error("not in block form at entry (" + std::to_string(row) + ", " + std::to_string(col) +
                         "): " + detail),
      row_(row),
      col_(col) {}

ExponentMatrix assemble(const PetrescuBlocks& b) {
    const unsigned s = b.s;
    if (s == 0) throw std::invalid_argument("assemble: s must be >= 1");
    if (b.X.q() != b.q || b.Y.q() != b.q || b.T.q() != b.q || b.D.q() != b.q)
        throw std::invalid_argument("assemble: block modulus mismatch");
    if (b.X.n_rows() != s || b.X.n_cols() != s) throw std::invalid_argument("assemble: X must be s x s");
    if (b.Y.n_rows() != s || b.Y.n_cols() != s) throw std::invalid_argument("assemble: Y must be s x s");
    if (b.T.n_rows() != s || b.T.n_cols() != s + 1) throw std::invalid_argument("assemble: T must be s x (s+1)");
    if (b.D.n_rows() != s + 1 || b.D.n_cols() != s + 1)
        throw std::invalid_argument("assemble: D must be (s+1) x (s+1)");

    const unsigned n = 3 * s + 1;
    ExponentMatrix m(b.q, n, n);
    const ExponentMatrix tstar = conj_transpose(b.T);
    for (unsigned i = 0; i < s; ++i)
        for (unsigned j = 0; j < s; ++j) {
            m.set(i, j, b.X.at(i, j));
            m.set(i, s + j, b.Y.at(i, j));
            m.set(s + i, j, b.Y.at(i, j));
            m.set(s + i, s + j, b.X.at(i, j));
        }
    for (unsigned i = 0; i < s; ++i)
        for (unsigned j = 0; j < s + 1; ++j) {
            m.set(i, 2 * s + j, b.T.at(i, j));
            m.set(s + i, 2 * s + j, b.T.at(i, j));
        }
    for (unsigned i = 0; i < s + 1; ++i) {
        for (unsigned j = 0; j < s; ++j) {
            m.set(2 * s + i, j, tstar.at(i, j));
            m.set(2 * s + i, s + j, tstar.at(i, j));
        }
        for (unsigned j = 0; j < s + 1; ++j) m.set(2 * s + i, 2 * s + j, b.D.at(i, j));
    }
    return m;
}

PetrescuBlocks extract_blocks(const ExponentMatrix& m, unsigned s) {
    if (s == 0) throw std::invalid_argument("extract_blocks: s must be >= 1");
    if (m.n_rows() != m.n_cols()) throw std::invalid_argument("extract_blocks: matrix must be square");
    if (m.n_rows() != 3 * s + 1)
        throw std::invalid_argument("extract_blocks: order " + std::to_string(m.n_rows()) +
                                    " does not match 3s+1 = " + std::to_string(3 * s + 1));

    PetrescuBlocks b{s, m.q(), m.submatrix(0, 0, s, s), m.submatrix(0, s, s, s), m.submatrix(0, 2 * s, s, s + 1),
                     m.submatrix(2 * s, 2 * s, s + 1, s + 1)};
    const ExponentMatrix reference = assemble(b);
    for (unsigned i = 0; i < m.n_rows(); ++i)
        for (unsigned j = 0; j < m.n_cols(); ++j)
            if (m.at(i, j) != reference.at(i, j)) {
                std::string detail;
                if (i < 2 * s)
                    detail = "second block row must repeat X, Y and T from the first";
                else if (j < 2 * s)
                    detail = "third block row must hold the conjugate transpose of T twice";
                else
                    detail = "block structure mismatch";
                throw NotPetrescuForm(i, j, detail);
            }
    return b;
}

namespace {

// Compare m against diag*I + off*J; violations sorted by (i, j).
EquationCheck check_against_target(std::string name, const CycMatrix& m, i64 diag, i64 off) {
    EquationCheck chk;
    chk.name = std::move(name);
    for (unsigned i = 0; i < m.n_rows(); ++i)
        for (unsigned j = 0; j < m.n_cols(); ++j) {
            const i64 target = off + (i == j ? diag : 0);
            const CycElem residual = m.at(i, j) - CycElem::from_int(m.q(), target);
            if (!residual.is_zero()) chk.violations.push_back({i, j, residual});
        }
    chk.passed = chk.violations.empty();
    return chk;
}

void finish(BlockReport& rep) {
    rep.passed = true;
    for (const EquationCheck& e : rep.equations)
        if (!e.passed) rep.passed = false;
}

}  // namespace

BlockReport check_system_a(const PetrescuBlocks& b) {
    const i64 n = 3 * static_cast<i64>(b.s) + 1;
    BlockReport rep;

    CycMatrix two_tt = gram_cols(b.T);
    for (unsigned i = 0; i < two_tt.n_rows(); ++i)
        for (unsigned j = 0; j < two_tt.n_cols(); ++j) two_tt.at(i, j) = two_tt.at(i, j) * 2;
    rep.equations.push_back(check_against_target("2T*T + DD* = (3s+1)I", two_tt + gram_rows(b.D), n, 0));

    rep.equations.push_back(
        check_against_target("XX* + YY* + TT* = (3s+1)I", gram_rows(b.X) + gram_rows(b.Y) + gram_rows(b.T), n, 0));

    rep.equations.push_back(check_against_target(
        "(X+Y)T + TD* = 0", prod_cyc_exp(sum_of_roots(b.X, b.Y), b.T) + prod_a_bstar(b.T, b.D), 0, 0));

    rep.equations.push_back(check_against_target(
        "XY* + YX* + TT* = 0", prod_a_bstar(b.X, b.Y) + prod_a_bstar(b.Y, b.X) + gram_rows(b.T), 0, 0));

    finish(rep);
    return rep;
}

BlockReport check_d(const ExponentMatrix& d, unsigned s) {
    if (d.n_rows() != s + 1 || d.n_cols() != s + 1)
        throw std::invalid_argument("check_d: D must be (s+1) x (s+1)");
    BlockReport rep;
    // Unimodular rows make the diagonal of DD* equal (s+1) = (s-1)+2
    // automatically, so the targets below can never flag the diagonal.
    rep.equations.push_back(check_against_target("DD* = (s-1)I + 2J", gram_rows(d), static_cast<i64>(s) - 1, 2));
    rep.equations.push_back(check_against_target("D*D = (s-1)I + 2J", gram_cols(d), static_cast<i64>(s) - 1, 2));

    // DJ = JD says exactly that all row sums and all column sums agree on
    // one common value; compare every line sum against row 0's.
    CycElem common(d.q());
    for (unsigned c = 0; c < d.n_cols(); ++c) common.add_root(static_cast<unsigned>(d.at(0, c)));
    EquationCheck rows_chk{"row sums share one value", true, {}};
    for (unsigned i = 1; i < d.n_rows(); ++i) {
        CycElem sum(d.q());
        for (unsigned c = 0; c < d.n_cols(); ++c) sum.add_root(static_cast<unsigned>(d.at(i, c)));
        const CycElem residual = sum - common;
        if (!residual.is_zero()) rows_chk.violations.push_back({i, 0, residual});
    }
    rows_chk.passed = rows_chk.violations.empty();
    rep.equations.push_back(std::move(rows_chk));

    EquationCheck cols_chk{"column sums equal the row sums", true, {}};
    for (unsigned j = 0; j < d.n_cols(); ++j) {
        CycElem sum(d.q());
        for (unsigned r = 0; r < d.n_rows(); ++r) sum.add_root(static_cast<unsigned>(d.at(r, j)));
        const CycElem residual = sum - common;
        if (!residual.is_zero()) cols_chk.violations.push_back({j, 0, residual});
    }
    cols_chk.passed = cols_chk.violations.empty();
    rep.equations.push_back(std::move(cols_chk));

    finish(rep);
    return rep;
}

BlockReport check_t_gram(const ExponentMatrix& t, unsigned s) {
    if (t.n_rows() != s || t.n_cols() != s + 1)
        throw std::invalid_argument("check_t_gram: T must be s x (s+1)");
    BlockReport rep;
    rep.equations.push_back(check_against_target("TT* = (s+1)I", gram_rows(t), static_cast<i64>(s) + 1, 0));
    rep.equations.push_back(check_against_target("T*T = (s+1)I - J", gram_cols(t), static_cast<i64>(s) + 1, -1));
    finish(rep);
    return rep;
}

BlockReport check_difference(const ExponentMatrix& x, const ExponentMatrix& y, unsigned s) {
    if (x.n_rows() != s || x.n_cols() != s || y.n_rows() != s || y.n_cols() != s)
        throw std::invalid_argument("check_difference: X and Y must be s x s");
    require_same_q(x.q(), y.q(), "check_difference");
    const CycMatrix diff = roots_of(x) + (-roots_of(y));
    BlockReport rep;
    rep.equations.push_back(
        check_against_target("(X-Y)(X-Y)* = (3s+1)I", gram_rows_cyc(diff), 3 * static_cast<i64>(s) + 1, 0));
    finish(rep);
    return rep;
}

std::variant<CycMatrix, DivisionFailure> compute_x_plus_y(const ExponentMatrix& t, const ExponentMatrix& d,
                                                          unsigned s) {
    if (t.n_rows() != s || t.n_cols() != s + 1)
        throw std::invalid_argument("compute_x_plus_y: T must be s x (s+1)");
    if (d.n_rows() != s + 1 || d.n_cols() != s + 1)
        throw std::invalid_argument("compute_x_plus_y: D must be (s+1) x (s+1)");
    require_same_q(t.q(), d.q(), "compute_x_plus_y");

    const CycMatrix tdstar = prod_a_bstar(t, d);
    const CycMatrix product = prod_cyc_expstar(tdstar, t);
    CycMatrix out(t.q(), s, s);
    for (unsigned i = 0; i < s; ++i)
        for (unsigned j = 0; j < s; ++j) {
            std::optional<CycElem> e = (-product.at(i, j)).div_exact(static_cast<i64>(s) + 1);
            if (!e) return DivisionFailure{i, j};
            out.at(i, j) = std::move(*e);
        }
    return out;
}

std::vector<std::pair<int, int>> decompose_pair_sum(const CycElem& c) {
    const unsigned q = c.q();
    std::vector<std::pair<int, int>> out;
    for (unsigned a = 0; a < q; ++a)
        for (unsigned b = a; b < q; ++b) {
            CycElem sum(q);
            sum.add_root(a);
            sum.add_root(b);
            if (sum == c) out.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    return out;
}

BlockReport check_blocks(const ExponentMatrix& m, unsigned s) {
    const PetrescuBlocks blocks = extract_blocks(m, s);
    BlockReport rep;
    auto absorb = [&rep](BlockReport part) {
        for (EquationCheck& eq : part.equations) rep.equations.push_back(std::move(eq));
    };
    absorb(check_system_a(blocks));
    absorb(check_d(blocks.D, s));
    absorb(check_t_gram(blocks.T, s));
    absorb(check_difference(blocks.X, blocks.Y, s));

    EquationCheck xy{"X + Y = -(1/(s+1)) T D* T*", true, {}};
    auto value = compute_x_plus_y(blocks.T, blocks.D, s);
    if (const auto* fail = std::get_if<DivisionFailure>(&value)) {
        xy.passed = false;
        // Report the indivisible position; the residual is the raw entry of T D* T*.
        const CycMatrix product = prod_cyc_expstar(prod_a_bstar(blocks.T, blocks.D), blocks.T);
        xy.violations.push_back(EntryViolation{fail->i, fail->j, product.at(fail->i, fail->j)});
    } else {
        const CycMatrix& want = std::get<CycMatrix>(value);
        for (unsigned i = 0; i < s; ++i)
            for (unsigned j = 0; j < s; ++j) {
                CycElem have = CycElem::root(m.q(), static_cast<unsigned>(blocks.X.at(i, j))) +
                               CycElem::root(m.q(), static_cast<unsigned>(blocks.Y.at(i, j)));
                CycElem residual = have + (-want.at(i, j));
                if (!residual.is_zero()) {
                    xy.passed = false;
                    xy.violations.push_back(EntryViolation{i, j, std::move(residual)});
                }
            }
    }
    rep.equations.push_back(std::move(xy));
    finish(rep);
    return rep;
}

}  // namespace butson
