#include "core/bmatrix.hpp"

#include <stdexcept>

namespace butson {

ExponentMatrix::ExponentMatrix(unsigned q, unsigned n_rows, unsigned n_cols, int fill)
    : q_(q), rows_(n_rows), cols_(n_cols), entries_(static_cast<size_t>(n_rows) * n_cols, fill) {
    if (q == 0) throw std::invalid_argument("ExponentMatrix: q must be >= 1");
    if (n_rows == 0 || n_cols == 0) throw std::invalid_argument("ExponentMatrix: empty dimensions");
    if (fill < 0 || static_cast<unsigned>(fill) >= q)
        throw std::invalid_argument("ExponentMatrix: fill exponent out of range");
}

ExponentMatrix ExponentMatrix::from_rows(unsigned q, const std::vector<std::vector<int>>& rows) {
    if (rows.empty() || rows[0].empty()) throw std::invalid_argument("from_rows: empty matrix");
    ExponentMatrix m(q, static_cast<unsigned>(rows.size()), static_cast<unsigned>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw std::invalid_argument("from_rows: ragged rows");
        for (size_t j = 0; j < rows[i].size(); ++j)
            m.set(static_cast<unsigned>(i), static_cast<unsigned>(j), rows[i][j]);
    }
    return m;
}

int ExponentMatrix::at(unsigned i, unsigned j) const {
    if (i >= rows_ || j >= cols_) throw std::invalid_argument("ExponentMatrix: index out of range");
    return entries_[static_cast<size_t>(i) * cols_ + j];
}

void ExponentMatrix::set(unsigned i, unsigned j, int e) {
    if (i >= rows_ || j >= cols_) throw std::invalid_argument("ExponentMatrix: index out of range");
    if (e < 0 || static_cast<unsigned>(e) >= q_)
        throw std::invalid_argument("ExponentMatrix: exponent out of range");
    entries_[static_cast<size_t>(i) * cols_ + j] = e;
}

ExponentMatrix ExponentMatrix::submatrix(unsigned row0, unsigned col0, unsigned n_rows, unsigned n_cols) const {
    if (row0 + n_rows > rows_ || col0 + n_cols > cols_)
        throw std::invalid_argument("submatrix: block out of range");
    ExponentMatrix out(q_, n_rows, n_cols);
    for (unsigned i = 0; i < n_rows; ++i)
        for (unsigned j = 0; j < n_cols; ++j)
            out.set(i, j, at(row0 + i, col0 + j));
    return out;
}

CycElem inner_product(const ExponentMatrix& m, unsigned i, unsigned k) {
    if (i >= m.n_rows() || k >= m.n_rows()) throw std::invalid_argument("inner_product: row out of range");
    const int q = static_cast<int>(m.q());
    CycElem acc(m.q());
    const int* ri = m.row_ptr(i);
    const int* rk = m.row_ptr(k);
    for (unsigned c = 0; c < m.n_cols(); ++c)
        acc.add_root(static_cast<unsigned>(((ri[c] - rk[c]) % q + q) % q));
    return acc;
}

CycElem inner_product_cols(const ExponentMatrix& m, unsigned j, unsigned l) {
    if (j >= m.n_cols() || l >= m.n_cols()) throw std::invalid_argument("inner_product_cols: column out of range");
    const int q = static_cast<int>(m.q());
    CycElem acc(m.q());
    for (unsigned r = 0; r < m.n_rows(); ++r)
        acc.add_root(static_cast<unsigned>(((m.at(r, j) - m.at(r, l)) % q + q) % q));
    return acc;
}

VerificationReport verify_bh(const ExponentMatrix& m) {
    if (m.n_rows() != m.n_cols()) throw std::invalid_argument("verify_bh: matrix must be square");
    VerificationReport rep;
    rep.order = m.n_rows();
    rep.q = m.q();
    for (unsigned i = 0; i < m.n_rows(); ++i)
        for (unsigned k = i + 1; k < m.n_rows(); ++k) {
            CycElem ip = inner_product(m, i, k);
            if (!ip.is_zero()) rep.violations.push_back({Axis::row, i, k, std::move(ip)});
        }
    for (unsigned j = 0; j < m.n_cols(); ++j)
        for (unsigned l = j + 1; l < m.n_cols(); ++l) {
            CycElem ip = inner_product_cols(m, j, l);
            if (!ip.is_zero()) rep.violations.push_back({Axis::col, j, l, std::move(ip)});
        }
    rep.is_hadamard = rep.violations.empty();
    return rep;
}

ExponentMatrix dephase(const ExponentMatrix& m) {
    if (m.n_rows() != m.n_cols()) throw std::invalid_argument("dephase: matrix must be square");
    const int q = static_cast<int>(m.q());
    ExponentMatrix out(m.q(), m.n_rows(), m.n_cols());
    for (unsigned i = 0; i < m.n_rows(); ++i)
        for (unsigned j = 0; j < m.n_cols(); ++j)
            out.set(i, j, ((m.at(i, j) - m.at(0, j)) % q + q) % q);
    for (unsigned i = 0; i < m.n_rows(); ++i) {
        const int head = out.at(i, 0);
        for (unsigned j = 0; j < m.n_cols(); ++j)
            out.set(i, j, ((out.at(i, j) - head) % q + q) % q);
    }
    return out;
}

ExponentMatrix conj_transpose(const ExponentMatrix& m) {
    ExponentMatrix out(m.q(), m.n_cols(), m.n_rows());
    const int q = static_cast<int>(m.q());
    for (unsigned i = 0; i < out.n_rows(); ++i)
        for (unsigned j = 0; j < out.n_cols(); ++j)
            out.set(i, j, (q - m.at(j, i)) % q);
    return out;
}

namespace {

void check_permutation(const std::vector<unsigned>& perm, unsigned n, const char* what) {
    if (perm.size() != n) throw std::invalid_argument(std::string(what) + ": permutation size mismatch");
    std::vector<bool> seen(n, false);
    for (unsigned p : perm) {
        if (p >= n || seen[p]) throw std::invalid_argument(std::string(what) + ": not a permutation");
        seen[p] = true;
    }
}

std::vector<unsigned> swap_perm(unsigned n, unsigned a, unsigned b, const char* what) {
    if (a >= n || b >= n) throw std::invalid_argument(std::string(what) + ": index out of range");
    std::vector<unsigned> perm(n);
    for (unsigned i = 0; i < n; ++i) perm[i] = i;
    std::swap(perm[a], perm[b]);
    return perm;
}

}  // namespace

ExponentMatrix permute_rows(const ExponentMatrix& m, const std::vector<unsigned>& perm) {
    check_permutation(perm, m.n_rows(), "permute_rows");
    ExponentMatrix out(m.q(), m.n_rows(), m.n_cols());
    for (unsigned i = 0; i < m.n_rows(); ++i)
        for (unsigned j = 0; j < m.n_cols(); ++j)
            out.set(i, j, m.at(perm[i], j));
    return out;
}

ExponentMatrix permute_cols(const ExponentMatrix& m, const std::vector<unsigned>& perm) {
    check_permutation(perm, m.n_cols(), "permute_cols");
    ExponentMatrix out(m.q(), m.n_rows(), m.n_cols());
    for (unsigned i = 0; i < m.n_rows(); ++i)
        for (unsigned j = 0; j < m.n_cols(); ++j)
            out.set(i, j, m.at(i, perm[j]));
    return out;
}

ExponentMatrix swap_rows(const ExponentMatrix& m, unsigned a, unsigned b) {
    return permute_rows(m, swap_perm(m.n_rows(), a, b, "swap_rows"));
}

ExponentMatrix swap_cols(const ExponentMatrix& m, unsigned a, unsigned b) {
    return permute_cols(m, swap_perm(m.n_cols(), a, b, "swap_cols"));
}

ExponentMatrix scale_row(const ExponentMatrix& m, unsigned i, unsigned j) {
    if (i >= m.n_rows()) throw std::invalid_argument("scale_row: row out of range");
    if (j >= m.q()) throw std::invalid_argument("scale_row: exponent out of range");
    ExponentMatrix out = m;
    for (unsigned c = 0; c < m.n_cols(); ++c)
        out.set(i, c, static_cast<int>((static_cast<unsigned>(m.at(i, c)) + j) % m.q()));
    return out;
}

ExponentMatrix scale_col(const ExponentMatrix& m, unsigned c, unsigned j) {
    if (c >= m.n_cols()) throw std::invalid_argument("scale_col: column out of range");
    if (j >= m.q()) throw std::invalid_argument("scale_col: exponent out of range");
    ExponentMatrix out = m;
    for (unsigned i = 0; i < m.n_rows(); ++i)
        out.set(i, c, static_cast<int>((static_cast<unsigned>(m.at(i, c)) + j) % m.q()));
    return out;
}

}  // namespace butson
