// Three-phase backtracking search for Butson-Hadamard matrices of order
// 3s+1 in Petrescu block form:
//
//   1. enumerate D blocks with Gram (s-1)I + 2J and a common line sum,
//   2. enumerate T blocks (noninitial rows of a normalized order-(s+1)
//      Butson matrix),
//   3. split the exact value of X + Y into per-entry root pairs and keep
//      the splits whose difference Gram is (3s+1)I.
//
// Every candidate solution is assembled and re-verified by verify_bh
// before it is reported.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "core/petrescu.hpp"

namespace butson {

struct SearchConfig {
    unsigned s = 6;
    unsigned q = 6;
    std::uint64_t max_d_candidates = 0;  // 0 = unlimited
    std::uint64_t max_t_candidates = 0;  // 0 = unlimited
    std::uint64_t max_solutions = 1;     // 0 = all
    bool deterministic_order = true;
    double time_budget_seconds = 0;  // <= 0 = no budget
    unsigned threads = 1;
    // Debug switch: disables every pruning heuristic (feasibility bounds,
    // line-sum filters, partial Gram cuts).  The searched space and the
    // exact leaf checks stay identical, so the solution stream must not
    // change.  Only practical for s <= 2.
    bool pruning_enabled = true;
};

struct SearchStats {
    std::uint64_t d_candidates = 0;  // D blocks yielded by phase 1
    std::uint64_t t_candidates = 0;  // T blocks yielded by phase 2
    std::uint64_t xy_branches = 0;   // nodes explored in phase 3
    std::uint64_t d_prunes = 0;      // partial D assignments cut
    std::uint64_t t_prunes = 0;      // backtracks while extending T row sets
    std::uint64_t xy_prunes = 0;     // (D,T) pairs cut by divisibility/decomposition/Gram
    std::uint64_t solutions = 0;
    double elapsed_ms = 0;
    bool truncated = false;  // time budget expired before the search finished
};

struct Solution {
    PetrescuBlocks blocks;
    ExponentMatrix matrix;  // assembled and verified
};

struct SearchOutcome {
    std::vector<Solution> solutions;
    SearchStats stats;
};

// All length-(s+1) exponent rows with first entry 0 whose roots sum to
// zero, in lexicographic order.  These are exactly the rows that can
// appear in a T block.
std::vector<std::vector<int>> t_row_candidates(unsigned s, unsigned q, bool pruning_enabled = true);

struct PhaseResult {
    std::uint64_t yielded = 0;
    std::uint64_t prunes = 0;
    bool truncated = false;
};

// Stream of D blocks passing check_d, restricted to the canonical form
// D[0][0] = 0 with rows in nondecreasing lexicographic order.  The yield
// callback returns false to stop the stream.
PhaseResult search_d(unsigned s, unsigned q, const SearchConfig& cfg,
                     const std::function<bool(const ExponentMatrix&)>& yield);

// Stream of T blocks: s mutually orthogonal zero-sum rows in increasing
// candidate order (each underlying order-(s+1) matrix is produced once,
// with its all-ones row dropped and its first column normalized to
// exponent zero).
PhaseResult enumerate_t(unsigned s, unsigned q, const SearchConfig& cfg,
                        const std::function<bool(const ExponentMatrix&)>& yield);

// Backtracks over per-entry decompositions of `sum` (an s x s matrix of
// two-root sums) into ordered pairs (X, Y), yielding exactly the splits
// with (X-Y)(X-Y)* = (3s+1)I.
struct XYResult {
    std::uint64_t branches = 0;
    std::uint64_t prunes = 0;
};
XYResult assign_xy(const CycMatrix& sum, bool pruning_enabled,
                   const std::function<bool(const ExponentMatrix&, const ExponentMatrix&)>& yield);

// Full pipeline.  D-major order: for each D candidate every T candidate
// is tried.  Solutions are deduplicated by dephased form and reported in
// canonical (D, T, split) order; with threads > 1 the D stream is
// partitioned across workers and merged back in canonical order, so the
// result list matches the single-threaded run.
// Requires q even (entries of X+Y equal to zero need antipodal root
// pairs, which only exist for even q).
SearchOutcome run_pipeline(const SearchConfig& cfg);

}  // namespace butson
