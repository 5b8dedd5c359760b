// Built-in matrices: the order-19 Butson-Hadamard witness over sixth
// roots of unity (fixture name "w19") and Fourier matrices.
#pragma once

#include <cstdint>

#include "core/bmatrix.hpp"

namespace butson {

// The 19x19 matrix over sixth roots of unity with Petrescu block
// structure at s = 6.  verify_bh accepts it; its blocks satisfy both
// block equation systems.
const ExponentMatrix& w19();

// Fourier matrix F_n: entry (i, k) = i*k mod n, a BH(n, n).
ExponentMatrix fourier(unsigned n);

// FNV-1a over (q, n_rows, n_cols, entries); integrity check for fixtures.
std::uint64_t matrix_checksum(const ExponentMatrix& m);

}  // namespace butson
