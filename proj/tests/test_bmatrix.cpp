#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "core/bmatrix.hpp"
#include "core/fixtures.hpp"
#include "core/io.hpp"
#include "oracles.hpp"

using namespace butson;

namespace {

ExponentMatrix random_matrix(unsigned q, unsigned n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> entry(0, static_cast<int>(q) - 1);
    ExponentMatrix m(q, n, n);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) m.set(i, j, entry(rng));
    return m;
}

}  // namespace

TEST_CASE("matrix construction and access validate") {
    CHECK_THROWS_AS(ExponentMatrix(0, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(ExponentMatrix(6, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(ExponentMatrix(6, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(ExponentMatrix(6, 2, 2, 6), std::invalid_argument);

    ExponentMatrix m(6, 2, 3);
    CHECK(m.q() == 6);
    CHECK(m.n_rows() == 2);
    CHECK(m.n_cols() == 3);
    CHECK(m.at(1, 2) == 0);
    m.set(1, 2, 5);
    CHECK(m.at(1, 2) == 5);
    CHECK_THROWS_AS(m.at(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(m.at(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(m.set(0, 0, 6), std::invalid_argument);
    CHECK_THROWS_AS(m.set(0, 0, -1), std::invalid_argument);

    CHECK_THROWS_AS(ExponentMatrix::from_rows(6, {}), std::invalid_argument);
    CHECK_THROWS_AS(ExponentMatrix::from_rows(6, {{0, 1}, {2}}), std::invalid_argument);
    ExponentMatrix f = ExponentMatrix::from_rows(6, {{0, 1}, {2, 3}});
    CHECK(f.at(1, 0) == 2);

    ExponentMatrix sub = f.submatrix(0, 1, 2, 1);
    CHECK(sub.n_rows() == 2);
    CHECK(sub.n_cols() == 1);
    CHECK(sub.at(0, 0) == 1);
    CHECK(sub.at(1, 0) == 3);
    CHECK_THROWS_AS(f.submatrix(1, 1, 2, 1), std::invalid_argument);
}

TEST_CASE("row and column inner products match floating-point evaluation") {
    std::mt19937_64 rng(123456);
    for (unsigned q : {2u, 3u, 4u, 6u, 12u}) {
        for (int trial = 0; trial < 30; ++trial) {
            ExponentMatrix m = random_matrix(q, 5, rng);
            for (unsigned i = 0; i < 5; ++i)
                for (unsigned k = 0; k < 5; ++k) {
                    CycElem ip = inner_product(m, i, k);
                    CHECK(oracle::is_float_zero(oracle::eval_elem(ip) - oracle::eval_row_ip(m, i, k)));
                }
            // Column inner products equal row inner products of the conjugate transpose.
            ExponentMatrix mt = conj_transpose(m);
            for (unsigned j = 0; j < 5; ++j)
                for (unsigned l = 0; l < 5; ++l)
                    CHECK(inner_product_cols(m, j, l) == inner_product(mt, l, j));
        }
    }
}

TEST_CASE("verify_bh accepts the Fourier family") {
    for (unsigned n = 2; n <= 8; ++n) {
        VerificationReport rep = verify_bh(fourier(n));
        CHECK(rep.is_hadamard);
        CHECK(rep.order == n);
        CHECK(rep.q == n);
        CHECK(rep.violations.empty());
    }
}

TEST_CASE("verify_bh accepts the order-19 fixture") {
    VerificationReport rep = verify_bh(w19());
    CHECK(rep.is_hadamard);
    CHECK(rep.order == 19);
    CHECK(rep.q == 6);
    CHECK(rep.violations.empty());
}

TEST_CASE("order-19 fixture checksum is stable") {
    CHECK(matrix_checksum(w19()) == 0xe2000512ab055546ULL);
    // The digest reacts to any single change.
    ExponentMatrix m = w19();
    m.set(7, 11, (m.at(7, 11) + 1) % 6);
    CHECK(matrix_checksum(m) != 0xe2000512ab055546ULL);
}

TEST_CASE("verify_bh rejects non-square input") {
    CHECK_THROWS_AS(verify_bh(ExponentMatrix(6, 2, 3)), std::invalid_argument);
}

TEST_CASE("verify_bh pinpoints a planted defect") {
    ExponentMatrix m = w19();
    m.set(4, 9, (m.at(4, 9) + 1) % 6);
    VerificationReport rep = verify_bh(m);
    CHECK_FALSE(rep.is_hadamard);
    REQUIRE_FALSE(rep.violations.empty());
    for (const PairViolation& v : rep.violations) {
        CHECK_FALSE(v.residual.is_zero());
        if (v.axis == Axis::row) {
            // Every failing row pair involves the perturbed row.
            CHECK((v.i == 4 || v.k == 4));
            CHECK(v.i < v.k);
        } else {
            CHECK((v.i == 9 || v.k == 9));
            CHECK(v.i < v.k);
        }
    }
}

TEST_CASE("verify_bh violation list agrees with floating-point Gram on random matrices") {
    std::mt19937_64 rng(20240402);
    for (int trial = 0; trial < 40; ++trial) {
        ExponentMatrix m = random_matrix(6, 5, rng);
        VerificationReport rep = verify_bh(m);
        std::set<std::pair<unsigned, unsigned>> reported;
        for (const PairViolation& v : rep.violations)
            if (v.axis == Axis::row) reported.insert({v.i, v.k});
        std::set<std::pair<unsigned, unsigned>> expected;
        for (unsigned i = 0; i < 5; ++i)
            for (unsigned k = i + 1; k < 5; ++k)
                if (!oracle::is_float_zero(oracle::eval_row_ip(m, i, k))) expected.insert({i, k});
        CHECK(reported == expected);
        CHECK(rep.is_hadamard == rep.violations.empty());
    }
}

TEST_CASE("dephase normalizes the first row and column and preserves the property") {
    ExponentMatrix d = dephase(w19());
    for (unsigned j = 0; j < 19; ++j) CHECK(d.at(0, j) == 0);
    for (unsigned i = 0; i < 19; ++i) CHECK(d.at(i, 0) == 0);
    CHECK(verify_bh(d).is_hadamard);
    CHECK(dephase(d) == d);
    // Fourier matrices are already dephased.
    CHECK(dephase(fourier(5)) == fourier(5));
    CHECK_THROWS_AS(dephase(ExponentMatrix(6, 2, 3)), std::invalid_argument);
}

TEST_CASE("conj_transpose is an involution and preserves the property") {
    ExponentMatrix m = w19();
    ExponentMatrix mt = conj_transpose(m);
    CHECK(conj_transpose(mt) == m);
    CHECK(verify_bh(mt).is_hadamard);
    for (unsigned i = 0; i < 4; ++i)
        for (unsigned j = 0; j < 4; ++j) {
            ExponentMatrix f = fourier(4);
            CHECK(mt.at(i, j) == (6 - m.at(j, i)) % 6);
            CHECK(conj_transpose(f).at(i, j) == (4 - f.at(j, i)) % 4);
        }
}

TEST_CASE("equivalence moves preserve the Hadamard property") {
    std::mt19937_64 rng(31337);
    ExponentMatrix m = w19();

    std::vector<unsigned> perm(19);
    for (unsigned i = 0; i < 19; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(verify_bh(permute_rows(m, perm)).is_hadamard);
    CHECK(verify_bh(permute_cols(m, perm)).is_hadamard);
    CHECK(verify_bh(swap_rows(m, 3, 15)).is_hadamard);
    CHECK(verify_bh(swap_cols(m, 0, 9)).is_hadamard);
    CHECK(verify_bh(scale_row(m, 4, 5)).is_hadamard);
    CHECK(verify_bh(scale_col(m, 18, 1)).is_hadamard);

    // Identity permutation is a no-op; a repeated image is rejected.
    std::vector<unsigned> ident(19);
    for (unsigned i = 0; i < 19; ++i) ident[i] = i;
    CHECK(permute_rows(m, ident) == m);
    std::vector<unsigned> bad = ident;
    bad[2] = 3;
    CHECK_THROWS_AS(permute_rows(m, bad), std::invalid_argument);
    CHECK_THROWS_AS(permute_cols(m, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(swap_rows(m, 0, 19), std::invalid_argument);
    CHECK_THROWS_AS(scale_row(m, 0, 6), std::invalid_argument);

    // Scaling a row twice by complementary amounts is a no-op.
    CHECK(scale_row(scale_row(m, 7, 2), 7, 4) == m);
}

TEST_CASE("grid parsing honors the header") {
    ExponentMatrix m = parse_grid("q 6 n 2 m 3\n0 1 2\n3 4 5\n");
    CHECK(m.q() == 6);
    CHECK(m.n_rows() == 2);
    CHECK(m.n_cols() == 3);
    CHECK(m.at(1, 2) == 5);

    // Square matrices need no 'm'.
    ExponentMatrix sq = parse_grid("q 2 n 2\n0 1\n1 0\n");
    CHECK(sq.n_cols() == 2);

    // Headerless input takes the caller's modulus.
    ExponentMatrix hl = parse_grid("0 1\n1 0\n", 2);
    CHECK(hl.q() == 2);
    CHECK(hl == sq);
}

TEST_CASE("grid parsing reports positions") {
    auto expect_error = [](const std::string& text, unsigned default_q, unsigned line, unsigned col) {
        try {
            parse_grid(text, default_q);
            FAIL_CHECK("expected a parse error for: " << text);
        } catch (const ParseError& e) {
            CHECK(e.line() == line);
            CHECK(e.col() == col);
        }
    };
    expect_error("", 6, 1, 1);                      // empty input
    expect_error("0 1\n1 0\n", 0, 1, 1);            // no modulus anywhere
    expect_error("q 6 n 2\n0 1\n", 0, 2, 1);        // row count mismatch
    expect_error("q 6 n 1\n0 1 x\n", 0, 2, 5);      // non-integer entry
    expect_error("q 6 n 1\n0 1 7\n", 0, 2, 5);      // exponent out of range
    expect_error("q 6 n 2\n0 1\n0 1 2\n", 0, 3, 1); // ragged row
    expect_error("q 0 n 2\n0 1\n1 0\n", 0, 1, 3);   // bad modulus
    expect_error("q 6 x 2\n0 1\n1 0\n", 0, 1, 5);   // malformed header

    // what() carries the position.
    try {
        parse_grid("q 6 n 1\n0 9\n");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("column 3") != std::string::npos);
    }
}

TEST_CASE("structured parsing validates the document") {
    const std::string good = R"({"format_version": 1, "q": 6, "n_rows": 1, "n_cols": 2, "rows": [[0, 5]]})";
    ExponentMatrix m = parse_structured(good);
    CHECK(m.q() == 6);
    CHECK(m.at(0, 1) == 5);

    CHECK_THROWS_AS(parse_structured("{"), ParseError);
    CHECK_THROWS_AS(parse_structured(R"({"q": 6})"), ParseError);
    CHECK_THROWS_AS(
        parse_structured(R"({"format_version": 2, "q": 6, "n_rows": 1, "n_cols": 1, "rows": [[0]]})"),
        ParseError);
    CHECK_THROWS_AS(
        parse_structured(R"({"format_version": 1, "q": 6, "n_rows": 1, "n_cols": 1, "rows": [[6]]})"),
        ParseError);
    CHECK_THROWS_AS(
        parse_structured(R"({"format_version": 1, "q": 6, "n_rows": 2, "n_cols": 1, "rows": [[0]]})"),
        ParseError);
}

TEST_CASE("parse_matrix sniffs the format") {
    CHECK(parse_matrix("q 2 n 1 m 2\n0 1\n") ==
          parse_matrix(R"(  {"format_version": 1, "q": 2, "n_rows": 1, "n_cols": 2, "rows": [[0, 1]]})"));
}

TEST_CASE("serialization round-trips") {
    std::mt19937_64 rng(4242);
    for (unsigned q : {2u, 6u, 12u}) {
        for (int trial = 0; trial < 20; ++trial) {
            ExponentMatrix m = random_matrix(q, 4, rng);
            CHECK(parse_grid(serialize_grid(m)) == m);
            const std::string doc = serialize_structured(m);
            CHECK(parse_structured(doc) == m);
            // Canonical serialization: parse-then-serialize is byte-identical.
            CHECK(serialize_structured(parse_structured(doc)) == doc);
        }
    }
    // Non-square grids keep their column count.
    ExponentMatrix rect(6, 2, 3);
    rect.set(0, 2, 4);
    CHECK(parse_grid(serialize_grid(rect)) == rect);
    CHECK(serialize_grid(rect).substr(0, 11) == "q 6 n 2 m 3");
}

TEST_CASE("report rendering carries the verdict and the violations") {
    VerificationReport good = verify_bh(fourier(3));
    CHECK(render_text(good).find("Butson-Hadamard") != std::string::npos);
    CHECK(render_json(good).find("\"passed\": true") != std::string::npos);

    ExponentMatrix m = w19();
    m.set(2, 2, (m.at(2, 2) + 3) % 6);
    VerificationReport bad = verify_bh(m);
    const std::string text = render_text(bad);
    CHECK(text.find("not Butson-Hadamard") != std::string::npos);
    CHECK(text.find("rows (") != std::string::npos);
    const std::string json = render_json(bad);
    CHECK(json.find("\"passed\": false") != std::string::npos);
    CHECK(json.find("\"format_version\": 1") != std::string::npos);
}
