// Text formats for exponent matrices.
//
// Grid format: an optional header line `q <q> n <rows> [m <cols>]`
// followed by one line per row, base-10 exponents separated by spaces.
// Without a header the modulus comes from the caller's default and the
// dimensions from the layout.
//
// Structured format: a JSON document
//   {"format_version": 1, "q": ..., "n_rows": ..., "n_cols": ..., "rows": [[...], ...]}
// serialized canonically, so parse(serialize(m)) round-trips byte-exactly.
#pragma once

#include <stdexcept>
#include <string>

#include "core/bmatrix.hpp"
#include "core/petrescu.hpp"

namespace butson {

class ParseError : public std::runtime_error {
public:
    ParseError(unsigned line, unsigned col, const std::string& message);
    unsigned line() const { return line_; }
    unsigned col() const { return col_; }

private:
    unsigned line_, col_;
};

// default_q == 0 means "no default": headerless grid input is rejected.
ExponentMatrix parse_grid(const std::string& text, unsigned default_q = 0);
ExponentMatrix parse_structured(const std::string& text);
// Sniffs the format: structured if the first non-space byte is '{'.
ExponentMatrix parse_matrix(const std::string& text, unsigned default_q = 0);

std::string serialize_grid(const ExponentMatrix& m);
std::string serialize_structured(const ExponentMatrix& m);

// Report rendering.  The JSON forms carry format_version 1 and exact
// residuals as reduced coordinate vectors.
std::string render_text(const VerificationReport& rep);
std::string render_json(const VerificationReport& rep);
std::string render_text(const BlockReport& rep, unsigned s, unsigned q);
std::string render_json(const BlockReport& rep, unsigned s, unsigned q);

}  // namespace butson
