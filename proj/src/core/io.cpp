#include "core/io.hpp"

#include <charconv>
#include <sstream>

#include "json.hpp"

namespace butson {

namespace {

struct Token {
    std::string text;
    unsigned line, col;  // 1-based
};

std::vector<std::vector<Token>> tokenize_lines(const std::string& text) {
    std::vector<std::vector<Token>> lines;
    unsigned line_no = 1;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t eol = text.find('\n', pos);
        const std::string_view line(text.data() + pos, (eol == std::string::npos ? text.size() : eol) - pos);
        std::vector<Token> toks;
        size_t i = 0;
        while (i < line.size()) {
            if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
                ++i;
                continue;
            }
            const size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
            toks.push_back({std::string(line.substr(start, i - start)), line_no, static_cast<unsigned>(start + 1)});
        }
        if (!toks.empty()) lines.push_back(std::move(toks));
        if (eol == std::string::npos) break;
        pos = eol + 1;
        ++line_no;
    }
    return lines;
}

long parse_int_token(const Token& t) {
    long value = 0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError(t.line, t.col, "expected an integer, got '" + t.text + "'");
    return value;
}

void compute_line_col(const std::string& text, size_t byte, unsigned& line, unsigned& col) {
    line = 1;
    col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
}

}  // namespace

ParseError::ParseError(unsigned line, unsigned col, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + message),
      line_(line),
      col_(col) {}

ExponentMatrix parse_grid(const std::string& text, unsigned default_q) {
    std::vector<std::vector<Token>> lines = tokenize_lines(text);
    if (lines.empty()) throw ParseError(1, 1, "empty input");

    unsigned q = default_q;
    long header_rows = -1, header_cols = -1;
    size_t first_row_line = 0;
    if (lines[0][0].text == "q") {
        const std::vector<Token>& h = lines[0];
        if (h.size() != 4 && h.size() != 6)
            throw ParseError(h[0].line, h[0].col, "header must be 'q <q> n <rows> [m <cols>]'");
        const long qv = parse_int_token(h[1]);
        if (qv < 1) throw ParseError(h[1].line, h[1].col, "modulus q must be >= 1");
        if (h[2].text != "n") throw ParseError(h[2].line, h[2].col, "expected 'n' in header");
        header_rows = parse_int_token(h[3]);
        if (header_rows < 1) throw ParseError(h[3].line, h[3].col, "row count must be >= 1");
        if (h.size() == 6) {
            if (h[4].text != "m") throw ParseError(h[4].line, h[4].col, "expected 'm' in header");
            header_cols = parse_int_token(h[5]);
            if (header_cols < 1) throw ParseError(h[5].line, h[5].col, "column count must be >= 1");
        }
        q = static_cast<unsigned>(qv);
        first_row_line = 1;
    }
    if (q == 0)
        throw ParseError(lines[0][0].line, lines[0][0].col,
                         "no modulus: input has no header and no default q was given");

    const size_t n_rows = lines.size() - first_row_line;
    if (n_rows == 0) throw ParseError(lines[0][0].line, lines[0][0].col, "no matrix rows");
    if (header_rows >= 0 && n_rows != static_cast<size_t>(header_rows)) {
        const Token& t = lines[first_row_line > 0 ? 1 : 0][0];
        throw ParseError(t.line, t.col,
                         "expected " + std::to_string(header_rows) + " rows, found " + std::to_string(n_rows));
    }
    const size_t n_cols = lines[first_row_line].size();
    if (header_cols >= 0 && n_cols != static_cast<size_t>(header_cols)) {
        const Token& t = lines[first_row_line][0];
        throw ParseError(t.line, t.col,
                         "expected " + std::to_string(header_cols) + " columns, found " + std::to_string(n_cols));
    }

    ExponentMatrix m(q, static_cast<unsigned>(n_rows), static_cast<unsigned>(n_cols));
    for (size_t i = 0; i < n_rows; ++i) {
        const std::vector<Token>& row = lines[first_row_line + i];
        if (row.size() != n_cols)
            throw ParseError(row[0].line, row[0].col,
                             "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n_cols));
        for (size_t j = 0; j < n_cols; ++j) {
            const long e = parse_int_token(row[j]);
            if (e < 0 || e >= static_cast<long>(q))
                throw ParseError(row[j].line, row[j].col,
                                 "exponent " + std::to_string(e) + " out of range [0, " + std::to_string(q) + ")");
            m.set(static_cast<unsigned>(i), static_cast<unsigned>(j), static_cast<int>(e));
        }
    }
    return m;
}

ExponentMatrix parse_structured(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        unsigned line, col;
        compute_line_col(text, e.byte > 0 ? e.byte - 1 : 0, line, col);
        throw ParseError(line, col, "invalid JSON: " + std::string(e.what()));
    }
    auto fail = [](const std::string& msg) -> ParseError { return ParseError(1, 1, msg); };
    if (!doc.is_object()) throw fail("structured document must be a JSON object");
    for (const char* key : {"format_version", "q", "n_rows", "n_cols", "rows"})
        if (!doc.contains(key)) throw fail(std::string("missing field '") + key + "'");
    if (!doc["format_version"].is_number_integer() || doc["format_version"].get<long>() != 1)
        throw fail("unsupported format_version (expected 1)");
    for (const char* key : {"q", "n_rows", "n_cols"})
        if (!doc[key].is_number_integer() || doc[key].get<long>() < 1)
            throw fail(std::string("field '") + key + "' must be a positive integer");
    const unsigned q = doc["q"].get<unsigned>();
    const unsigned n_rows = doc["n_rows"].get<unsigned>();
    const unsigned n_cols = doc["n_cols"].get<unsigned>();
    if (!doc["rows"].is_array() || doc["rows"].size() != n_rows)
        throw fail("'rows' must be an array of n_rows rows");
    ExponentMatrix m(q, n_rows, n_cols);
    for (unsigned i = 0; i < n_rows; ++i) {
        const auto& row = doc["rows"][i];
        if (!row.is_array() || row.size() != n_cols)
            throw fail("row " + std::to_string(i) + " must be an array of n_cols entries");
        for (unsigned j = 0; j < n_cols; ++j) {
            if (!row[j].is_number_integer()) throw fail("matrix entries must be integers");
            const long e = row[j].get<long>();
            if (e < 0 || e >= static_cast<long>(q))
                throw fail("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range [0, " +
                           std::to_string(q) + ")");
            m.set(i, j, static_cast<int>(e));
        }
    }
    return m;
}

ExponentMatrix parse_matrix(const std::string& text, unsigned default_q) {
    for (char ch : text) {
        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') continue;
        if (ch == '{') return parse_structured(text);
        break;
    }
    return parse_grid(text, default_q);
}

std::string serialize_grid(const ExponentMatrix& m) {
    std::ostringstream os;
    os << "q " << m.q() << " n " << m.n_rows();
    if (m.n_cols() != m.n_rows()) os << " m " << m.n_cols();
    os << "\n";
    for (unsigned i = 0; i < m.n_rows(); ++i) {
        for (unsigned j = 0; j < m.n_cols(); ++j) {
            if (j) os << " ";
            os << m.at(i, j);
        }
        os << "\n";
    }
    return os.str();
}

std::string serialize_structured(const ExponentMatrix& m) {
    nlohmann::ordered_json doc;
    doc["format_version"] = 1;
    doc["q"] = m.q();
    doc["n_rows"] = m.n_rows();
    doc["n_cols"] = m.n_cols();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (unsigned i = 0; i < m.n_rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (unsigned j = 0; j < m.n_cols(); ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

namespace {

nlohmann::ordered_json residual_json(const CycElem& e) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (i64 c : e.canonical()) arr.push_back(c);
    return arr;
}

}  // namespace

std::string render_text(const VerificationReport& rep) {
    std::ostringstream os;
    os << "order " << rep.order << ", q " << rep.q << ": "
       << (rep.is_hadamard ? "Butson-Hadamard" : "not Butson-Hadamard") << "\n";
    for (const PairViolation& v : rep.violations)
        os << "  " << (v.axis == Axis::row ? "rows" : "columns") << " (" << v.i << ", " << v.k
           << "): inner product " << v.residual.to_string() << "\n";
    return os.str();
}

std::string render_json(const VerificationReport& rep) {
    nlohmann::ordered_json doc;
    doc["format_version"] = 1;
    doc["check"] = "hadamard";
    doc["passed"] = rep.is_hadamard;
    doc["order"] = rep.order;
    doc["q"] = rep.q;
    nlohmann::ordered_json vs = nlohmann::ordered_json::array();
    for (const PairViolation& v : rep.violations) {
        nlohmann::ordered_json item;
        item["axis"] = v.axis == Axis::row ? "row" : "col";
        item["i"] = v.i;
        item["k"] = v.k;
        item["residual"] = residual_json(v.residual);
        vs.push_back(std::move(item));
    }
    doc["violations"] = std::move(vs);
    return doc.dump(2) + "\n";
}

std::string render_text(const BlockReport& rep, unsigned s, unsigned q) {
    std::ostringstream os;
    os << "block checks for s " << s << ", q " << q << ": " << (rep.passed ? "pass" : "FAIL") << "\n";
    for (const EquationCheck& eq : rep.equations) {
        os << "  " << (eq.passed ? "pass" : "FAIL") << "  " << eq.name << "\n";
        for (const EntryViolation& v : eq.violations)
            os << "        entry (" << v.i << ", " << v.j << "): residual " << v.residual.to_string() << "\n";
    }
    return os.str();
}

std::string render_json(const BlockReport& rep, unsigned s, unsigned q) {
    nlohmann::ordered_json doc;
    doc["format_version"] = 1;
    doc["check"] = "blocks";
    doc["passed"] = rep.passed;
    doc["s"] = s;
    doc["q"] = q;
    nlohmann::ordered_json eqs = nlohmann::ordered_json::array();
    for (const EquationCheck& eq : rep.equations) {
        nlohmann::ordered_json item;
        item["name"] = eq.name;
        item["passed"] = eq.passed;
        nlohmann::ordered_json vs = nlohmann::ordered_json::array();
        for (const EntryViolation& v : eq.violations) {
            nlohmann::ordered_json ventry;
            ventry["i"] = v.i;
            ventry["j"] = v.j;
            ventry["residual"] = residual_json(v.residual);
            vs.push_back(std::move(ventry));
        }
        item["violations"] = std::move(vs);
        eqs.push_back(std::move(item));
    }
    doc["equations"] = std::move(eqs);
    return doc.dump(2) + "\n";
}

}  // namespace butson
