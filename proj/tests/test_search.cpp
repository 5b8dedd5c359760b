#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "core/fixtures.hpp"
#include "core/io.hpp"
#include "core/search.hpp"
#include "oracles.hpp"

using namespace butson;

namespace {

// Independent zero-sum test: evaluate the row numerically.
bool row_sums_to_zero(unsigned q, const std::vector<int>& row) {
    oracle::complexld sum = 0;
    for (int e : row) sum += oracle::eval_root(q, e);
    return oracle::is_float_zero(sum);
}

// Brute-force reference for t_row_candidates: all q^s rows with a leading
// zero, filtered by the numeric zero test, in the natural (lex) order.
std::vector<std::vector<int>> brute_t_rows(unsigned s, unsigned q) {
    std::vector<std::vector<int>> out;
    std::vector<int> row(s + 1, 0);
    while (true) {
        if (row_sums_to_zero(q, row)) out.push_back(row);
        unsigned pos = s;
        while (pos >= 1 && row[pos] == static_cast<int>(q) - 1) row[pos--] = 0;
        if (pos == 0) break;
        ++row[pos];
    }
    return out;
}

std::vector<ExponentMatrix> collect_d(unsigned s, unsigned q, const SearchConfig& cfg) {
    std::vector<ExponentMatrix> out;
    search_d(s, q, cfg, [&](const ExponentMatrix& d) {
        out.push_back(d);
        return true;
    });
    return out;
}

// Brute-force reference for the D phase: every (s+1)x(s+1) grid with
// D[0][0] = 0 and rows in nondecreasing lex order that passes check_d.
// Rows are encoded as base-q integers; a pair table keeps it tractable.
std::vector<ExponentMatrix> brute_d(unsigned s, unsigned q) {
    const unsigned n = s + 1;
    std::vector<std::vector<int>> rows;
    std::vector<int> row(n, 0);
    while (true) {
        rows.push_back(row);
        unsigned pos = n - 1;
        while (pos > 0 && row[pos] == static_cast<int>(q) - 1) row[pos--] = 0;
        if (pos == 0 && row[0] == static_cast<int>(q) - 1) break;
        ++row[pos];
    }
    // Off-diagonal Gram target is 2 for every row pair.
    auto pair_ok = [&](const std::vector<int>& a, const std::vector<int>& b) {
        oracle::complexld ip = 0;
        for (unsigned c = 0; c < n; ++c)
            ip += oracle::eval_root(q, a[c]) * std::conj(oracle::eval_root(q, b[c]));
        return oracle::is_float_zero(ip - oracle::complexld(2));
    };
    std::vector<ExponentMatrix> out;
    std::vector<size_t> pick(n, 0);
    // Nondecreasing row tuples, first row starting with exponent 0.
    std::function<void(unsigned, size_t)> rec = [&](unsigned level, size_t from) {
        if (level == n) {
            std::vector<std::vector<int>> grid;
            for (size_t idx : pick) grid.push_back(rows[idx]);
            ExponentMatrix d = ExponentMatrix::from_rows(q, grid);
            if (check_d(d, s).passed) out.push_back(d);
            return;
        }
        for (size_t i = from; i < rows.size(); ++i) {
            if (level == 0 && rows[i][0] != 0) continue;
            bool ok = true;
            for (unsigned prev = 0; prev < level && ok; ++prev) ok = pair_ok(rows[pick[prev]], rows[i]);
            if (!ok) continue;
            pick[level] = i;
            rec(level + 1, i);
        }
    };
    rec(0, 0);
    return out;
}

std::string solution_key(const Solution& sol) { return serialize_grid(sol.matrix); }

}  // namespace

TEST_CASE("t_row_candidates matches brute enumeration") {
    for (auto [s, q] : {std::pair<unsigned, unsigned>{1, 2},
                        {1, 4},
                        {1, 6},
                        {2, 3},
                        {2, 4},
                        {2, 6},
                        {3, 6},
                        {2, 12}}) {
        CAPTURE(s);
        CAPTURE(q);
        CHECK(t_row_candidates(s, q) == brute_t_rows(s, q));
        // Disabling pruning must not change the list.
        CHECK(t_row_candidates(s, q, false) == t_row_candidates(s, q, true));
    }
}

TEST_CASE("t_row_candidates frozen counts and shape") {
    using rows_t = std::vector<std::vector<int>>;
    CHECK(t_row_candidates(2, 4).empty());
    CHECK(t_row_candidates(2, 6) == rows_t{{0, 2, 4}, {0, 4, 2}});
    CHECK(t_row_candidates(4, 6).size() == 60);

    rows_t big = t_row_candidates(6, 6);
    CHECK(big.size() == 1680);
    CHECK(std::is_sorted(big.begin(), big.end()));
    for (const auto& row : big) {
        CHECK(row.size() == 7);
        CHECK(row[0] == 0);
        CHECK(row_sums_to_zero(6, row));
    }
}

TEST_CASE("enumerate_t yields exactly the orthogonal row tuples") {
    // Frozen small counts.
    auto count_t = [](unsigned s, unsigned q) {
        SearchConfig cfg;
        cfg.s = s;
        cfg.q = q;
        std::uint64_t n = 0;
        enumerate_t(s, q, cfg, [&](const ExponentMatrix&) {
            ++n;
            return true;
        });
        return n;
    };
    CHECK(count_t(1, 6) == 1);
    CHECK(count_t(2, 6) == 1);
    CHECK(count_t(3, 6) == 7);
    CHECK(count_t(2, 4) == 0);
    CHECK(count_t(2, 12) == 1);

    // The lone (2,6) block is the two candidate rows, which happen to be
    // orthogonal.
    SearchConfig cfg;
    cfg.s = 2;
    cfg.q = 6;
    std::vector<ExponentMatrix> blocks;
    enumerate_t(2, 6, cfg, [&](const ExponentMatrix& t) {
        blocks.push_back(t);
        return true;
    });
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0] == ExponentMatrix::from_rows(6, {{0, 2, 4}, {0, 4, 2}}));
    CHECK(check_t_gram(blocks[0], 2).passed);

    // Every (3,6) block satisfies the T-block Gram identities, rows are
    // strictly increasing candidate rows.
    SearchConfig cfg3;
    cfg3.s = 3;
    cfg3.q = 6;
    enumerate_t(3, 6, cfg3, [&](const ExponentMatrix& t) {
        CHECK(check_t_gram(t, 3).passed);
        std::vector<std::vector<int>> rows;
        for (unsigned i = 0; i < t.n_rows(); ++i)
            rows.emplace_back(t.row_ptr(i), t.row_ptr(i) + t.n_cols());
        CHECK(std::is_sorted(rows.begin(), rows.end()));
        CHECK(std::adjacent_find(rows.begin(), rows.end()) == rows.end());
        return true;
    });
}

TEST_CASE("enumerate_t covers the order-19 fixture's T block") {
    // The fixture's T rows are zero-sum but normalized with a trailing
    // zero; shifting each row to a leading zero preserves orthogonality
    // and lands every row in the candidate list.
    PetrescuBlocks b = extract_blocks(w19(), 6);
    std::vector<std::vector<int>> rows;
    for (unsigned i = 0; i < 6; ++i) {
        const int head = b.T.at(i, 0);
        std::vector<int> row;
        for (unsigned j = 0; j < 7; ++j) row.push_back(((b.T.at(i, j) - head) % 6 + 6) % 6);
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end());
    const ExponentMatrix target = ExponentMatrix::from_rows(6, rows);

    SearchConfig cfg;
    cfg.s = 6;
    cfg.q = 6;
    std::uint64_t count = 0;
    bool found = false;
    PhaseResult res = enumerate_t(6, 6, cfg, [&](const ExponentMatrix& t) {
        ++count;
        if ((count & 0x7f) == 0) CHECK(check_t_gram(t, 6).passed);
        if (t == target) found = true;
        return true;
    });
    CHECK(res.yielded == 5880);
    CHECK(count == 5880);
    CHECK(found);
    CHECK_FALSE(res.truncated);
}

TEST_CASE("enumerate_t respects limits and early stop") {
    SearchConfig cfg;
    cfg.s = 6;
    cfg.q = 6;
    std::vector<std::string> full;
    enumerate_t(6, 6, cfg, [&](const ExponentMatrix& t) {
        full.push_back(serialize_grid(t));
        return full.size() < 50;  // early stop via the callback
    });
    CHECK(full.size() == 50);

    SearchConfig limited = cfg;
    limited.max_t_candidates = 20;
    std::vector<std::string> prefix;
    PhaseResult res = enumerate_t(6, 6, limited, [&](const ExponentMatrix& t) {
        prefix.push_back(serialize_grid(t));
        return true;
    });
    CHECK(res.yielded == 20);
    REQUIRE(prefix.size() == 20);
    // The limited run is a prefix of the unlimited one.
    CHECK(std::equal(prefix.begin(), prefix.end(), full.begin()));
}

TEST_CASE("search_d matches brute enumeration") {
    for (auto [s, q] : {std::pair<unsigned, unsigned>{1, 2}, {1, 4}, {1, 6}, {2, 4}, {2, 6}}) {
        CAPTURE(s);
        CAPTURE(q);
        SearchConfig cfg;
        cfg.s = s;
        cfg.q = q;
        std::vector<ExponentMatrix> got = collect_d(s, q, cfg);
        std::vector<ExponentMatrix> want = brute_d(s, q);
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
    }
}

TEST_CASE("search_d canonical form and frozen count") {
    SearchConfig cfg;
    cfg.s = 2;
    cfg.q = 6;
    std::vector<ExponentMatrix> ds = collect_d(2, 6, cfg);
    CHECK(ds.size() == 4);
    for (const ExponentMatrix& d : ds) {
        CHECK(d.at(0, 0) == 0);
        std::vector<std::vector<int>> rows;
        for (unsigned i = 0; i < d.n_rows(); ++i)
            rows.emplace_back(d.row_ptr(i), d.row_ptr(i) + d.n_cols());
        CHECK(std::is_sorted(rows.begin(), rows.end()));
        CHECK(check_d(d, 2).passed);
    }

    // A handful of order-7 D blocks stream out quickly under a cap, each
    // passing the exact checks.
    SearchConfig big;
    big.s = 6;
    big.q = 6;
    big.max_d_candidates = 3;
    std::vector<ExponentMatrix> first = collect_d(6, 6, big);
    CHECK(first.size() == 3);
    for (const ExponentMatrix& d : first) {
        CHECK(d.at(0, 0) == 0);
        CHECK(check_d(d, 6).passed);
    }
}

TEST_CASE("search_d pruning does not change the stream") {
    for (auto [s, q] : {std::pair<unsigned, unsigned>{1, 6}, {2, 4}, {2, 6}}) {
        CAPTURE(s);
        CAPTURE(q);
        SearchConfig pruned;
        pruned.s = s;
        pruned.q = q;
        SearchConfig unpruned = pruned;
        unpruned.pruning_enabled = false;
        std::vector<ExponentMatrix> a = collect_d(s, q, pruned);
        std::vector<ExponentMatrix> b = collect_d(s, q, unpruned);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
}

TEST_CASE("search_d honors caps and stop requests") {
    SearchConfig cfg;
    cfg.s = 2;
    cfg.q = 6;
    cfg.max_d_candidates = 2;
    std::vector<ExponentMatrix> capped = collect_d(2, 6, cfg);
    SearchConfig full;
    full.s = 2;
    full.q = 6;
    std::vector<ExponentMatrix> all = collect_d(2, 6, full);
    REQUIRE(capped.size() == 2);
    CHECK(capped[0] == all[0]);
    CHECK(capped[1] == all[1]);

    std::uint64_t seen = 0;
    PhaseResult res = search_d(2, 6, full, [&](const ExponentMatrix&) {
        ++seen;
        return false;  // stop after the first
    });
    CHECK(seen == 1);
    CHECK(res.yielded == 1);
}

TEST_CASE("assign_xy recovers every valid split") {
    // The (2,6) pipeline has a single T and four D blocks; build the sum
    // for the first and check the splits directly.
    SearchConfig cfg;
    cfg.s = 2;
    cfg.q = 6;
    cfg.max_solutions = 0;
    SearchOutcome out = run_pipeline(cfg);
    REQUIRE_FALSE(out.solutions.empty());
    const PetrescuBlocks& b = out.solutions[0].blocks;

    auto value = compute_x_plus_y(b.T, b.D, 2);
    REQUIRE(std::holds_alternative<CycMatrix>(value));
    const CycMatrix& sum = std::get<CycMatrix>(value);

    std::vector<std::pair<ExponentMatrix, ExponentMatrix>> splits;
    assign_xy(sum, true, [&](const ExponentMatrix& x, const ExponentMatrix& y) {
        splits.emplace_back(x, y);
        return true;
    });
    // The known solution's (X, Y) pair is among them, as is its mirror.
    bool have = false, have_mirror = false;
    for (const auto& [x, y] : splits) {
        if (x == b.X && y == b.Y) have = true;
        if (x == b.Y && y == b.X) have_mirror = true;
        // Every split satisfies the difference Gram and recombines to the sum.
        CHECK(check_difference(x, y, 2).passed);
        CHECK(sum_of_roots(x, y) == sum);
    }
    CHECK(have);
    CHECK(have_mirror);

    // Pruning must not change the split stream.
    std::vector<std::pair<ExponentMatrix, ExponentMatrix>> unpruned;
    assign_xy(sum, false, [&](const ExponentMatrix& x, const ExponentMatrix& y) {
        unpruned.emplace_back(x, y);
        return true;
    });
    REQUIRE(splits.size() == unpruned.size());
    for (size_t i = 0; i < splits.size(); ++i) {
        CHECK(splits[i].first == unpruned[i].first);
        CHECK(splits[i].second == unpruned[i].second);
    }
}

TEST_CASE("assign_xy yields nothing for indecomposable sums") {
    CycMatrix sum(6, 1, 1);
    sum.at(0, 0) = CycElem::from_int(6, 3);  // 3 is not a sum of two sixth roots
    std::uint64_t n = 0;
    assign_xy(sum, true, [&](const ExponentMatrix&, const ExponentMatrix&) {
        ++n;
        return true;
    });
    CHECK(n == 0);
}

TEST_CASE("pipeline frozen solution counts for small parameters") {
    auto run = [](unsigned s, unsigned q) {
        SearchConfig cfg;
        cfg.s = s;
        cfg.q = q;
        cfg.max_solutions = 0;
        return run_pipeline(cfg);
    };
    CHECK(run(1, 2).stats.solutions == 2);
    CHECK(run(1, 4).stats.solutions == 4);
    CHECK(run(1, 6).stats.solutions == 6);
    CHECK(run(2, 2).stats.solutions == 0);
    CHECK(run(2, 4).stats.solutions == 0);

    SearchOutcome out = run(2, 6);
    CHECK(out.stats.solutions == 96);
    CHECK(out.solutions.size() == 96);
    CHECK(out.stats.d_candidates == 4);
    CHECK(out.stats.t_candidates == 1);
    CHECK(out.stats.xy_branches == 832);
    CHECK_FALSE(out.stats.truncated);

    // Every reported solution is a verified Butson-Hadamard matrix in
    // block form, and the dephased forms are pairwise distinct.
    std::set<std::string> dephased;
    for (const Solution& sol : out.solutions) {
        CHECK(sol.matrix.n_rows() == 7);
        CHECK(verify_bh(sol.matrix).is_hadamard);
        CHECK(check_blocks(sol.matrix, 2).passed);
        CHECK(assemble(sol.blocks) == sol.matrix);
        dephased.insert(serialize_grid(dephase(sol.matrix)));
    }
    CHECK(dephased.size() == 96);
}

TEST_CASE("pipeline rejects odd moduli") {
    SearchConfig cfg;
    cfg.s = 2;
    cfg.q = 3;
    CHECK_THROWS_AS(run_pipeline(cfg), std::invalid_argument);
}

TEST_CASE("pipeline max_solutions and candidate caps give prefixes") {
    SearchConfig base;
    base.s = 2;
    base.q = 6;
    base.max_solutions = 0;
    SearchOutcome full = run_pipeline(base);

    SearchConfig few = base;
    few.max_solutions = 5;
    SearchOutcome capped = run_pipeline(few);
    REQUIRE(capped.solutions.size() == 5);
    for (size_t i = 0; i < 5; ++i) CHECK(solution_key(capped.solutions[i]) == solution_key(full.solutions[i]));

    SearchConfig dcap = base;
    dcap.max_d_candidates = 2;
    SearchOutcome partial = run_pipeline(dcap);
    CHECK(partial.stats.d_candidates == 2);
    REQUIRE(partial.solutions.size() <= full.solutions.size());
    for (size_t i = 0; i < partial.solutions.size(); ++i)
        CHECK(solution_key(partial.solutions[i]) == solution_key(full.solutions[i]));
}

TEST_CASE("pipeline is deterministic, including across thread counts") {
    SearchConfig base;
    base.s = 2;
    base.q = 6;
    base.max_solutions = 0;

    SearchOutcome a = run_pipeline(base);
    SearchOutcome b = run_pipeline(base);
    SearchConfig mt = base;
    mt.threads = 4;
    SearchOutcome c = run_pipeline(mt);

    auto keys = [](const SearchOutcome& out) {
        std::vector<std::string> v;
        for (const Solution& sol : out.solutions) v.push_back(solution_key(sol));
        return v;
    };
    CHECK(keys(a) == keys(b));
    CHECK(keys(a) == keys(c));
    CHECK(c.stats.solutions == a.stats.solutions);
}

TEST_CASE("pipeline finds an order-19 matrix quickly when capped") {
    SearchConfig cfg;  // defaults: s = 6, q = 6, one solution
    cfg.max_solutions = 1;
    cfg.time_budget_seconds = 300;
    SearchOutcome out = run_pipeline(cfg);
    REQUIRE(out.solutions.size() == 1);
    const Solution& sol = out.solutions[0];
    CHECK(sol.matrix.n_rows() == 19);
    CHECK(verify_bh(sol.matrix).is_hadamard);
    CHECK(check_blocks(sol.matrix, 6).passed);
    CHECK_FALSE(out.stats.truncated);
}

TEST_CASE("time budget truncates the search and says so") {
    SearchConfig cfg;
    cfg.s = 6;
    cfg.q = 6;
    cfg.max_solutions = 0;           // would run for a very long time
    cfg.time_budget_seconds = 0.05;  // expires almost immediately
    SearchOutcome out = run_pipeline(cfg);
    CHECK(out.stats.truncated);

    // The same flag surfaces from the D phase on its own.
    SearchConfig dcfg;
    dcfg.s = 6;
    dcfg.q = 6;
    dcfg.time_budget_seconds = 0.05;
    PhaseResult res = search_d(6, 6, dcfg, [](const ExponentMatrix&) { return true; });
    CHECK(res.truncated);
}

TEST_CASE("stats are populated") {
    SearchConfig cfg;
    cfg.s = 2;
    cfg.q = 6;
    cfg.max_solutions = 0;
    SearchOutcome out = run_pipeline(cfg);
    CHECK(out.stats.elapsed_ms >= 0);
    CHECK(out.stats.xy_branches > 0);
    CHECK(out.stats.solutions == out.solutions.size());
}
