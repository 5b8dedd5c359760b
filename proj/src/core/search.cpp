#include "core/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "core/bmatrix.hpp"
#include "core/io.hpp"

namespace butson {

namespace {

using Clock = std::chrono::steady_clock;

// Shared stop/budget control.  should_continue() is polled at coarse
// intervals from every phase; it latches `truncated` when the deadline
// passes so callers can tell a budget stop from a solution-cap stop.
struct Ticker {
    std::optional<Clock::time_point> deadline;
    std::atomic<bool>* stop = nullptr;
    std::atomic<bool>* truncated = nullptr;

    bool should_continue() {
        if (stop != nullptr && stop->load(std::memory_order_relaxed)) return false;
        if (deadline && Clock::now() >= *deadline) {
            if (truncated != nullptr) truncated->store(true, std::memory_order_relaxed);
            if (stop != nullptr) stop->store(true, std::memory_order_relaxed);
            return false;
        }
        return true;
    }
};

Ticker make_ticker(const SearchConfig& cfg, std::atomic<bool>* stop, std::atomic<bool>* truncated) {
    Ticker t;
    if (cfg.time_budget_seconds > 0) {
        auto budget = std::chrono::duration_cast<Clock::duration>(
            std::chrono::duration<double>(cfg.time_budget_seconds));
        t.deadline = Clock::now() + budget;
    }
    t.stop = stop;
    t.truncated = truncated;
    return t;
}

// Packs up to 8 reduced coordinates, each in [-128, 127], into a u64 key.
std::uint64_t encode_coords(const i64* v, unsigned phi) {
    std::uint64_t out = 0;
    for (unsigned k = 0; k < phi; ++k) out = (out << 8) | static_cast<std::uint64_t>(v[k] + 128);
    return out;
}

// Residue table in flat form: reduced coordinates of ζ_q^j for each j, plus
// the exact value sets of one- and two-root sums used by the feasibility test.
struct FlatTable {
    unsigned q = 0;
    unsigned phi = 0;
    std::vector<i64> red;  // q * phi, row j holds the coordinates of ζ^j
    i64 maxc = 0;
    bool exact_small_sets = false;
    std::set<std::uint64_t> sums1;
    std::set<std::uint64_t> sums2;

    explicit FlatTable(unsigned q_) : q(q_) {
        const CycloTable& tab = cyclo_table(q);
        phi = tab.degree;
        red.assign(static_cast<size_t>(q) * phi, 0);
        for (unsigned j = 0; j < q; ++j)
            for (unsigned k = 0; k < phi; ++k)
                red[static_cast<size_t>(j) * phi + k] = tab.root_residue[j][k];
        maxc = tab.max_residue_coeff;
        exact_small_sets = (phi <= 8 && maxc <= 60);
        if (exact_small_sets) {
            std::vector<i64> v(phi);
            for (unsigned a = 0; a < q; ++a) {
                for (unsigned k = 0; k < phi; ++k) v[k] = red[static_cast<size_t>(a) * phi + k];
                sums1.insert(encode_coords(v.data(), phi));
                for (unsigned b = 0; b < q; ++b) {
                    for (unsigned k = 0; k < phi; ++k)
                        v[k] = red[static_cast<size_t>(a) * phi + k] + red[static_cast<size_t>(b) * phi + k];
                    sums2.insert(encode_coords(v.data(), phi));
                }
            }
        }
    }
};

// True when a reduced-coordinate vector can still reach zero by adding
// `remaining` more roots.  Exact for remaining <= 2, a sound coefficient
// bound otherwise.
bool reachable(const i64* v, unsigned phi, std::uint64_t remaining, const FlatTable& ft) {
    const i64 bound = static_cast<i64>(remaining) * ft.maxc;
    for (unsigned k = 0; k < phi; ++k)
        if (v[k] > bound || v[k] < -bound) return false;
    if (remaining == 0) return true;  // the bound loop just proved all-zero
    if (!ft.exact_small_sets || remaining > 2) return true;
    std::uint64_t key = encode_coords(v, phi);
    return remaining == 1 ? ft.sums1.count(key) != 0 : ft.sums2.count(key) != 0;
}

// ---------------------------------------------------------------------------
// Phase 1: D blocks
// ---------------------------------------------------------------------------

class DSearcher {
public:
    DSearcher(unsigned s, unsigned q, const SearchConfig& cfg, Ticker ticker)
        : s_(s), q_(q), n_(s + 1), ft_(q), prune_(cfg.pruning_enabled),
          max_yield_(cfg.max_d_candidates), ticker_(ticker) {
        grid_.assign(static_cast<size_t>(n_) * n_, 0);
        pair_resid_.assign(static_cast<size_t>(n_) * n_ * ft_.phi, 0);
        rowsum_resid_.assign(static_cast<size_t>(n_) * ft_.phi, 0);
        colsum_.assign(static_cast<size_t>(n_) * ft_.phi, 0);
        lambda_.assign(ft_.phi, 0);
        scratch_.assign(ft_.phi, 0);
        target_.assign(ft_.phi, 0);
        target_[0] = 2;  // off-diagonal Gram target: 2 * ζ^0
        row0_counts_.assign(q_, 0);
    }

    PhaseResult run(const std::function<bool(const ExponentMatrix&)>& yield) {
        yield_ = &yield;
        aborted_ = false;
        result_ = PhaseResult{};
        grid_[0] = 0;  // dephased corner; every candidate is reported in this form
        add_col(0, 0);
        row0_counts_[0] = 1;
        place(0, 1, false);
        sub_col(0, 0);
        row0_counts_[0] = 0;
        return result_;
    }

private:
    const unsigned s_, q_, n_;
    const FlatTable ft_;
    const bool prune_;
    const std::uint64_t max_yield_;
    Ticker ticker_;

    std::vector<int> grid_;
    std::vector<i64> pair_resid_;    // [(i*n + k) * phi]: 2 - <row i prefix, row k>
    std::vector<i64> rowsum_resid_;  // [i * phi]: lambda - partial sum of row i
    std::vector<i64> colsum_;        // [c * phi]: partial column sums
    std::vector<i64> lambda_;        // coordinates of the row-0 sum
    std::vector<i64> scratch_;
    std::vector<i64> target_;
    std::vector<i64> row0_counts_;   // root multiplicities of row 0

    const std::function<bool(const ExponentMatrix&)>* yield_ = nullptr;
    PhaseResult result_;
    bool aborted_ = false;
    std::uint64_t node_counter_ = 0;

    i64* pr(unsigned i, unsigned k) { return pair_resid_.data() + (static_cast<size_t>(i) * n_ + k) * ft_.phi; }
    i64* rs(unsigned i) { return rowsum_resid_.data() + static_cast<size_t>(i) * ft_.phi; }
    i64* cs(unsigned c) { return colsum_.data() + static_cast<size_t>(c) * ft_.phi; }
    const i64* red(int j) const { return ft_.red.data() + static_cast<size_t>(j) * ft_.phi; }

    void add_col(unsigned c, int e) {
        const i64* r = red(e);
        i64* dst = cs(c);
        for (unsigned k = 0; k < ft_.phi; ++k) dst[k] += r[k];
    }
    void sub_col(unsigned c, int e) {
        const i64* r = red(e);
        i64* dst = cs(c);
        for (unsigned k = 0; k < ft_.phi; ++k) dst[k] -= r[k];
    }

    bool tick() {
        if ((++node_counter_ & 0x1fff) == 0 && !ticker_.should_continue()) aborted_ = true;
        return !aborted_;
    }

    // Summing DD* = (s-1)I + 2J over all entries forces |row sum|^2 = 3s+1,
    // so a row 0 whose sum has the wrong norm can never extend to a candidate.
    bool row0_sum_admissible() const {
        CycElem sum(q_, row0_counts_);
        CycElem norm = detail::cyc_mul(sum, sum.conj());
        return norm == CycElem::from_int(q_, static_cast<i64>(3) * s_ + 1);
    }

    void start_row(unsigned i) {
        for (unsigned k = 0; k < i; ++k) std::copy(target_.begin(), target_.end(), pr(i, k));
        std::copy(lambda_.begin(), lambda_.end(), rs(i));
    }

    void finish_grid() {
        ExponentMatrix m(q_, n_, n_);
        for (unsigned i = 0; i < n_; ++i)
            for (unsigned j = 0; j < n_; ++j) m.set(i, j, grid_[static_cast<size_t>(i) * n_ + j]);
        if (!check_d(m, s_).passed) {
            ++result_.prunes;
            return;
        }
        ++result_.yielded;
        if (!(*yield_)(m)) {
            aborted_ = true;
            return;
        }
        if (max_yield_ != 0 && result_.yielded >= max_yield_) aborted_ = true;
    }

    // Fill cell (i, c); `tight` means row i equals row i-1 so far, in which
    // case the nondecreasing-rows order restricts the entry range.
    void place(unsigned i, unsigned c, bool tight) {
        if (aborted_) return;
        if (c == n_) {
            if (i == 0) {
                CycElem sum(q_, row0_counts_);
                std::vector<i64> can = sum.canonical();
                std::copy(can.begin(), can.end(), lambda_.begin());
                if (prune_ && !row0_sum_admissible()) {
                    ++result_.prunes;
                    return;
                }
            }
            if (i + 1 == n_) {
                finish_grid();
                return;
            }
            start_row(i + 1);
            place(i + 1, 0, true);
            return;
        }
        const int lo = (i > 0 && tight) ? grid_[static_cast<size_t>(i - 1) * n_ + c] : 0;
        const unsigned rem_in_row = n_ - 1 - c;
        const unsigned rem_in_col = n_ - 1 - i;
        for (int e = lo; e < static_cast<int>(q_); ++e) {
            if (!tick()) return;
            grid_[static_cast<size_t>(i) * n_ + c] = e;
            add_col(c, e);
            if (i == 0) {
                ++row0_counts_[e];
                place(i, c + 1, false);
                --row0_counts_[e];
                sub_col(c, e);
                if (aborted_) return;
                continue;
            }
            for (unsigned k = 0; k < i; ++k) {
                const i64* r = red((e - grid_[static_cast<size_t>(k) * n_ + c] + static_cast<int>(q_)) %
                                   static_cast<int>(q_));
                i64* dst = pr(i, k);
                for (unsigned t = 0; t < ft_.phi; ++t) dst[t] -= r[t];
            }
            {
                const i64* r = red(e);
                i64* dst = rs(i);
                for (unsigned t = 0; t < ft_.phi; ++t) dst[t] -= r[t];
            }
            bool ok = true;
            if (prune_) {
                for (unsigned k = 0; ok && k < i; ++k) ok = reachable(pr(i, k), ft_.phi, rem_in_row, ft_);
                if (ok) ok = reachable(rs(i), ft_.phi, rem_in_row, ft_);
                if (ok) {
                    const i64* col = cs(c);
                    for (unsigned t = 0; t < ft_.phi; ++t) scratch_[t] = lambda_[t] - col[t];
                    ok = reachable(scratch_.data(), ft_.phi, rem_in_col, ft_);
                }
                if (!ok) ++result_.prunes;
            }
            if (ok) place(i, c + 1, tight && e == lo);
            for (unsigned k = 0; k < i; ++k) {
                const i64* r = red((e - grid_[static_cast<size_t>(k) * n_ + c] + static_cast<int>(q_)) %
                                   static_cast<int>(q_));
                i64* dst = pr(i, k);
                for (unsigned t = 0; t < ft_.phi; ++t) dst[t] += r[t];
            }
            {
                const i64* r = red(e);
                i64* dst = rs(i);
                for (unsigned t = 0; t < ft_.phi; ++t) dst[t] += r[t];
            }
            sub_col(c, e);
            if (aborted_) return;
        }
    }
};

PhaseResult run_d_phase(unsigned s, unsigned q, const SearchConfig& cfg, Ticker ticker,
                        const std::function<bool(const ExponentMatrix&)>& yield) {
    DSearcher searcher(s, q, cfg, ticker);
    return searcher.run(yield);
}

// ---------------------------------------------------------------------------
// Phase 2: T blocks
// ---------------------------------------------------------------------------

bool rows_orthogonal(const std::vector<int>& a, const std::vector<int>& b, const FlatTable& ft) {
    std::vector<i64> acc(ft.phi, 0);
    const int q = static_cast<int>(ft.q);
    for (size_t c = 0; c < a.size(); ++c) {
        const i64* r = ft.red.data() + static_cast<size_t>((a[c] - b[c] + q) % q) * ft.phi;
        for (unsigned k = 0; k < ft.phi; ++k) acc[k] += r[k];
    }
    for (unsigned k = 0; k < ft.phi; ++k)
        if (acc[k] != 0) return false;
    return true;
}

struct TEnumerator {
    unsigned s, q, n;
    FlatTable ft;
    std::vector<std::vector<int>> rows;
    Ticker ticker;
    std::uint64_t max_yield = 0;
    PhaseResult result;
    bool aborted = false;
    std::uint64_t node_counter = 0;
    std::vector<std::vector<char>> orth;

    TEnumerator(unsigned s_, unsigned q_, const SearchConfig& cfg, Ticker t)
        : s(s_), q(q_), n(s_ + 1), ft(q_), ticker(t), max_yield(cfg.max_t_candidates) {
        rows = t_row_candidates(s, q, cfg.pruning_enabled);
        orth.assign(rows.size(), std::vector<char>(rows.size(), 0));
        for (size_t a = 0; a < rows.size(); ++a)
            for (size_t b = a + 1; b < rows.size(); ++b)
                orth[a][b] = orth[b][a] = rows_orthogonal(rows[a], rows[b], ft) ? 1 : 0;
    }

    bool tick() {
        if ((++node_counter & 0xff) == 0 && !ticker.should_continue()) aborted = true;
        return !aborted;
    }

    void extend(std::vector<int>& chosen, const std::function<bool(const std::vector<int>&)>& yield) {
        if (aborted) return;
        if (chosen.size() == s) {
            ++result.yielded;
            if (!yield(chosen)) {
                aborted = true;
                return;
            }
            if (max_yield != 0 && result.yielded >= max_yield) aborted = true;
            return;
        }
        const size_t first = chosen.empty() ? 0 : static_cast<size_t>(chosen.back()) + 1;
        if (rows.size() - first < s - chosen.size()) {
            ++result.prunes;
            return;
        }
        for (size_t idx = first; idx < rows.size(); ++idx) {
            if (!tick()) return;
            bool ok = true;
            for (int prev : chosen)
                if (!orth[static_cast<size_t>(prev)][idx]) {
                    ok = false;
                    break;
                }
            if (!ok) {
                ++result.prunes;
                continue;
            }
            chosen.push_back(static_cast<int>(idx));
            extend(chosen, yield);
            chosen.pop_back();
            if (aborted) return;
        }
    }

    PhaseResult run(const std::function<bool(const std::vector<int>&)>& yield) {
        result = PhaseResult{};
        aborted = false;
        std::vector<int> chosen;
        chosen.reserve(s);
        extend(chosen, yield);
        return result;
    }

    ExponentMatrix build(const std::vector<int>& tuple) const {
        ExponentMatrix t(q, s, n);
        for (unsigned i = 0; i < s; ++i)
            for (unsigned j = 0; j < n; ++j) t.set(i, j, rows[static_cast<size_t>(tuple[i])][j]);
        return t;
    }
};

// ---------------------------------------------------------------------------
// Phase 3: X/Y assignment
// ---------------------------------------------------------------------------

using PairList = std::vector<std::pair<int, int>>;

// Ordered pairs (a, b) with ζ^a + ζ^b equal to the target, expanded from the
// unordered decomposition in a fixed order.
PairList ordered_pairs(const CycElem& target) {
    PairList out;
    for (const auto& [a, b] : decompose_pair_sum(target)) {
        out.emplace_back(a, b);
        if (a != b) out.emplace_back(b, a);
    }
    return out;
}

class XYSearcher {
public:
    XYSearcher(const CycMatrix& sum, bool prune)
        : s_(sum.n_rows()), q_(sum.q()), ft_(sum.q()), prune_(prune) {
        options_.resize(static_cast<size_t>(s_) * s_);
        for (unsigned i = 0; i < s_; ++i)
            for (unsigned j = 0; j < s_; ++j)
                options_[static_cast<size_t>(i) * s_ + j] = ordered_pairs(sum.at(i, j));
        x_.assign(static_cast<size_t>(s_) * s_, 0);
        y_.assign(static_cast<size_t>(s_) * s_, 0);
    }

    XYResult run(const std::function<bool(const ExponentMatrix&, const ExponentMatrix&)>& yield) {
        yield_ = &yield;
        result_ = XYResult{};
        aborted_ = false;
        for (const auto& opts : options_)
            if (opts.empty()) {
                ++result_.prunes;
                return result_;
            }
        step(0);
        return result_;
    }

private:
    unsigned s_, q_;
    FlatTable ft_;
    bool prune_;
    std::vector<PairList> options_;
    std::vector<int> x_, y_;
    const std::function<bool(const ExponentMatrix&, const ExponentMatrix&)>* yield_ = nullptr;
    XYResult result_;
    bool aborted_ = false;

    // Gram of difference rows i, k over completed entries; target (3s+1)·[i==k].
    bool diff_gram_ok(unsigned i, unsigned k) const {
        std::vector<i64> acc(ft_.phi, 0);
        const int q = static_cast<int>(q_);
        for (unsigned c = 0; c < s_; ++c) {
            const int xi = x_[static_cast<size_t>(i) * s_ + c], yi = y_[static_cast<size_t>(i) * s_ + c];
            const int xk = x_[static_cast<size_t>(k) * s_ + c], yk = y_[static_cast<size_t>(k) * s_ + c];
            const i64* r1 = ft_.red.data() + static_cast<size_t>((xi - xk + q) % q) * ft_.phi;
            const i64* r2 = ft_.red.data() + static_cast<size_t>((xi - yk + q) % q) * ft_.phi;
            const i64* r3 = ft_.red.data() + static_cast<size_t>((yi - xk + q) % q) * ft_.phi;
            const i64* r4 = ft_.red.data() + static_cast<size_t>((yi - yk + q) % q) * ft_.phi;
            for (unsigned t = 0; t < ft_.phi; ++t) acc[t] += r1[t] - r2[t] - r3[t] + r4[t];
        }
        const i64 diag = (i == k) ? static_cast<i64>(3) * s_ + 1 : 0;
        if (acc[0] != diag) return false;
        for (unsigned t = 1; t < ft_.phi; ++t)
            if (acc[t] != 0) return false;
        return true;
    }

    bool row_complete_ok(unsigned i) const {
        for (unsigned k = 0; k <= i; ++k)
            if (!diff_gram_ok(i, k)) return false;
        return true;
    }

    void emit() {
        ExponentMatrix x(q_, s_, s_), y(q_, s_, s_);
        for (unsigned i = 0; i < s_; ++i)
            for (unsigned j = 0; j < s_; ++j) {
                x.set(i, j, x_[static_cast<size_t>(i) * s_ + j]);
                y.set(i, j, y_[static_cast<size_t>(i) * s_ + j]);
            }
        if (!(*yield_)(x, y)) aborted_ = true;
    }

    void step(unsigned cell) {
        if (aborted_) return;
        if (cell == s_ * s_) {
            if (!prune_) {
                for (unsigned i = 0; i < s_; ++i)
                    if (!row_complete_ok(i)) {
                        ++result_.prunes;
                        return;
                    }
            }
            emit();
            return;
        }
        const unsigned i = cell / s_, j = cell % s_;
        for (const auto& [a, b] : options_[cell]) {
            ++result_.branches;
            x_[cell] = a;
            y_[cell] = b;
            if (prune_ && j == s_ - 1 && !row_complete_ok(i)) {
                ++result_.prunes;
                continue;
            }
            step(cell + 1);
            if (aborted_) return;
        }
    }
};

// ---------------------------------------------------------------------------
// Pipeline plumbing
// ---------------------------------------------------------------------------

std::string dephased_key(const ExponentMatrix& m) { return serialize_grid(dephase(m)); }

// Accepts per-D solution batches in canonical D order (when ordered),
// deduplicating by dephased form and honoring the solution cap.
class Collector {
public:
    Collector(std::uint64_t cap, bool ordered, std::atomic<bool>* stop)
        : cap_(cap), ordered_(ordered), stop_(stop) {}

    void submit(std::uint64_t seq, std::vector<Solution> batch) {
        std::lock_guard<std::mutex> lk(mu_);
        if (!ordered_) {
            accept_batch(std::move(batch));
            return;
        }
        pending_[seq] = std::move(batch);
        while (true) {
            auto it = pending_.find(frontier_);
            if (it == pending_.end()) break;
            accept_batch(std::move(it->second));
            pending_.erase(it);
            ++frontier_;
        }
    }

    std::vector<Solution> take() {
        std::lock_guard<std::mutex> lk(mu_);
        return std::move(accepted_);
    }

private:
    void accept_batch(std::vector<Solution> batch) {
        for (Solution& sol : batch) {
            if (cap_ != 0 && accepted_.size() >= cap_) break;
            std::string key = dephased_key(sol.matrix);
            if (!seen_.insert(std::move(key)).second) continue;
            accepted_.push_back(std::move(sol));
        }
        if (cap_ != 0 && accepted_.size() >= cap_ && stop_ != nullptr)
            stop_->store(true, std::memory_order_relaxed);
    }

    const std::uint64_t cap_;
    const bool ordered_;
    std::atomic<bool>* stop_;
    std::mutex mu_;
    std::uint64_t frontier_ = 0;
    std::map<std::uint64_t, std::vector<Solution>> pending_;
    std::vector<Solution> accepted_;
    std::set<std::string> seen_;
};

template <class T>
class BoundedQueue {
public:
    explicit BoundedQueue(size_t cap) : cap_(cap) {}

    bool push(T v) {
        std::unique_lock<std::mutex> lk(mu_);
        cv_push_.wait(lk, [&] { return items_.size() < cap_ || closed_; });
        if (closed_) return false;
        items_.push_back(std::move(v));
        cv_pop_.notify_one();
        return true;
    }

    std::optional<T> pop() {
        std::unique_lock<std::mutex> lk(mu_);
        cv_pop_.wait(lk, [&] { return !items_.empty() || closed_; });
        if (items_.empty()) return std::nullopt;
        T v = std::move(items_.front());
        items_.pop_front();
        cv_push_.notify_one();
        return v;
    }

    void close() {
        std::lock_guard<std::mutex> lk(mu_);
        closed_ = true;
        cv_push_.notify_all();
        cv_pop_.notify_all();
    }

private:
    const size_t cap_;
    std::mutex mu_;
    std::condition_variable cv_push_, cv_pop_;
    std::deque<T> items_;
    bool closed_ = false;
};

struct PipelineShared {
    const SearchConfig* cfg = nullptr;
    const TEnumerator* tenum = nullptr;
    const std::vector<std::vector<int>>* tuples = nullptr;
    std::atomic<std::uint64_t> xy_branches{0};
    std::atomic<std::uint64_t> xy_prunes{0};
};

struct WorkerScratch {
    std::map<std::vector<i64>, PairList> decomp_memo;  // keyed by canonical coordinates
};

// Row r of T times D*: entry c is sum_k ζ^{r[k] - D[c][k]}, kept as a root
// multiset so later shifts stay cheap.
std::vector<std::vector<i64>> t_row_times_dstar(const std::vector<int>& row, const ExponentMatrix& d) {
    const unsigned n = d.n_rows();
    const int q = static_cast<int>(d.q());
    std::vector<std::vector<i64>> v(n, std::vector<i64>(d.q(), 0));
    for (unsigned c = 0; c < n; ++c)
        for (unsigned k = 0; k < n; ++k) ++v[c][static_cast<size_t>((row[k] - d.at(c, k) + q) % q)];
    return v;
}

// One D candidate against the full T list: compute X+Y, split it, assemble,
// verify.  Returns this D's solutions in canonical order, deduplicated.
std::vector<Solution> process_d(const ExponentMatrix& d, PipelineShared& sh, WorkerScratch& scratch,
                                Ticker& ticker) {
    const SearchConfig& cfg = *sh.cfg;
    const unsigned s = cfg.s, q = cfg.q, n = s + 1;
    const CycloTable& tab = cyclo_table(q);
    const i64 divisor = static_cast<i64>(s) + 1;
    std::vector<Solution> out;

    const auto& rows = sh.tenum->rows;
    std::vector<char> have(rows.size(), 0);
    std::vector<std::vector<std::vector<i64>>> vcache(rows.size());
    auto vrow = [&](int idx) -> const std::vector<std::vector<i64>>& {
        if (!have[static_cast<size_t>(idx)]) {
            vcache[static_cast<size_t>(idx)] = t_row_times_dstar(rows[static_cast<size_t>(idx)], d);
            have[static_cast<size_t>(idx)] = 1;
        }
        return vcache[static_cast<size_t>(idx)];
    };

    std::vector<i64> acc(q), can(tab.degree);
    for (const std::vector<int>& tuple : *sh.tuples) {
        if (!ticker.should_continue()) break;
        // X+Y entry (i, j) = -(1/(s+1)) sum_c v_i[c] ζ^{-T[j][c]}.
        CycMatrix sum(q, s, s);
        bool ok = true;
        for (unsigned i = 0; ok && i < s; ++i) {
            const auto& vi = vrow(tuple[i]);
            for (unsigned j = 0; ok && j < s; ++j) {
                const std::vector<int>& tj = rows[static_cast<size_t>(tuple[j])];
                std::fill(acc.begin(), acc.end(), 0);
                for (unsigned c = 0; c < n; ++c) {
                    const unsigned shift = (q - static_cast<unsigned>(tj[c])) % q;
                    const std::vector<i64>& counts = vi[c];
                    for (unsigned e = 0; e < q; ++e) acc[(e + shift) % q] += counts[e];
                }
                std::fill(can.begin(), can.end(), 0);
                for (unsigned e = 0; e < q; ++e) {
                    if (acc[e] == 0) continue;
                    for (unsigned t = 0; t < tab.degree; ++t) can[t] -= acc[e] * tab.root_residue[e][t];
                }
                for (unsigned t = 0; t < tab.degree && ok; ++t) {
                    if (can[t] % divisor != 0) ok = false;
                    else can[t] /= divisor;
                }
                if (!ok) break;
                std::vector<i64> coeffs(q, 0);
                for (unsigned t = 0; t < tab.degree; ++t) coeffs[t] = can[t];
                sum.at(i, j) = CycElem(q, coeffs);
            }
        }
        if (!ok) {
            sh.xy_prunes.fetch_add(1, std::memory_order_relaxed);
            continue;
        }

        bool decomposable = true;
        for (unsigned i = 0; decomposable && i < s; ++i)
            for (unsigned j = 0; j < s; ++j) {
                std::vector<i64> key = sum.at(i, j).canonical();
                auto it = scratch.decomp_memo.find(key);
                if (it == scratch.decomp_memo.end())
                    it = scratch.decomp_memo.emplace(std::move(key), ordered_pairs(sum.at(i, j))).first;
                if (it->second.empty()) {
                    decomposable = false;
                    break;
                }
            }
        if (!decomposable) {
            sh.xy_prunes.fetch_add(1, std::memory_order_relaxed);
            continue;
        }

        ExponentMatrix t_block = sh.tenum->build(tuple);
        XYSearcher xy(sum, cfg.pruning_enabled);
        XYResult xr = xy.run([&](const ExponentMatrix& x, const ExponentMatrix& y) {
            PetrescuBlocks blocks{s, q, x, y, t_block, d};
            ExponentMatrix m = assemble(blocks);
            if (verify_bh(m).is_hadamard) {
                out.push_back(Solution{std::move(blocks), std::move(m)});
            } else {
                sh.xy_prunes.fetch_add(1, std::memory_order_relaxed);
            }
            return ticker.should_continue();
        });
        sh.xy_branches.fetch_add(xr.branches, std::memory_order_relaxed);
        sh.xy_prunes.fetch_add(xr.prunes, std::memory_order_relaxed);
    }

    std::set<std::string> local;
    std::vector<Solution> deduped;
    deduped.reserve(out.size());
    for (Solution& sol : out)
        if (local.insert(dephased_key(sol.matrix)).second) deduped.push_back(std::move(sol));
    return deduped;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

std::vector<std::vector<int>> t_row_candidates(unsigned s, unsigned q, bool pruning_enabled) {
    if (s == 0 || q == 0) throw std::invalid_argument("t_row_candidates: s and q must be positive");
    const FlatTable ft(q);
    const unsigned n = s + 1;
    std::vector<std::vector<int>> out;
    std::vector<int> row(n, 0);
    // deficit = what the remaining entries must still sum to; reachable()
    // expects that orientation (for odd q the root set is not symmetric
    // under negation, so the sign matters).
    std::vector<i64> deficit(ft.phi, 0);
    for (unsigned k = 0; k < ft.phi; ++k) deficit[k] = -ft.red[k];  // the fixed leading 0

    std::function<void(unsigned)> walk = [&](unsigned pos) {
        if (pos == n) {
            for (unsigned k = 0; k < ft.phi; ++k)
                if (deficit[k] != 0) return;
            out.push_back(row);
            return;
        }
        for (int e = 0; e < static_cast<int>(q); ++e) {
            const i64* r = ft.red.data() + static_cast<size_t>(e) * ft.phi;
            for (unsigned k = 0; k < ft.phi; ++k) deficit[k] -= r[k];
            row[pos] = e;
            if (!pruning_enabled || reachable(deficit.data(), ft.phi, n - 1 - pos, ft)) walk(pos + 1);
            for (unsigned k = 0; k < ft.phi; ++k) deficit[k] += r[k];
        }
    };
    walk(1);
    return out;
}

PhaseResult search_d(unsigned s, unsigned q, const SearchConfig& cfg,
                     const std::function<bool(const ExponentMatrix&)>& yield) {
    if (s == 0 || q == 0) throw std::invalid_argument("search_d: s and q must be positive");
    std::atomic<bool> stop{false}, truncated{false};
    Ticker ticker = make_ticker(cfg, &stop, &truncated);
    PhaseResult r = run_d_phase(s, q, cfg, ticker, yield);
    r.truncated = truncated.load();
    return r;
}

PhaseResult enumerate_t(unsigned s, unsigned q, const SearchConfig& cfg,
                        const std::function<bool(const ExponentMatrix&)>& yield) {
    if (s == 0 || q == 0) throw std::invalid_argument("enumerate_t: s and q must be positive");
    std::atomic<bool> stop{false}, truncated{false};
    Ticker ticker = make_ticker(cfg, &stop, &truncated);
    TEnumerator te(s, q, cfg, ticker);
    PhaseResult r = te.run([&](const std::vector<int>& tuple) { return yield(te.build(tuple)); });
    r.truncated = truncated.load();
    return r;
}

XYResult assign_xy(const CycMatrix& sum, bool pruning_enabled,
                   const std::function<bool(const ExponentMatrix&, const ExponentMatrix&)>& yield) {
    if (sum.n_rows() != sum.n_cols()) throw std::invalid_argument("assign_xy: sum must be square");
    XYSearcher xy(sum, pruning_enabled);
    return xy.run(yield);
}

SearchOutcome run_pipeline(const SearchConfig& cfg) {
    if (cfg.s == 0) throw std::invalid_argument("run_pipeline: s must be positive");
    if (cfg.q == 0 || cfg.q % 2 != 0)
        throw std::invalid_argument("run_pipeline: q must be a positive even integer");
    if (cfg.threads == 0) throw std::invalid_argument("run_pipeline: threads must be positive");

    const auto start = Clock::now();
    SearchOutcome outcome;
    SearchStats& st = outcome.stats;

    std::atomic<bool> stop{false}, truncated{false};
    Ticker ticker = make_ticker(cfg, &stop, &truncated);

    // The T list is shared across every D candidate, so it is built once.
    TEnumerator tenum(cfg.s, cfg.q, cfg, ticker);
    std::vector<std::vector<int>> tuples;
    PhaseResult tres = tenum.run([&](const std::vector<int>& tuple) {
        tuples.push_back(tuple);
        return true;
    });
    st.t_candidates = tres.yielded;
    st.t_prunes = tres.prunes;

    PipelineShared sh;
    sh.cfg = &cfg;
    sh.tenum = &tenum;
    sh.tuples = &tuples;
    Collector collector(cfg.max_solutions, cfg.deterministic_order, &stop);

    PhaseResult dres;
    if (!truncated.load() && !tuples.empty()) {
        if (cfg.threads == 1) {
            WorkerScratch scratch;
            std::uint64_t seq = 0;
            dres = run_d_phase(cfg.s, cfg.q, cfg, ticker, [&](const ExponentMatrix& d) {
                collector.submit(seq++, process_d(d, sh, scratch, ticker));
                return ticker.should_continue();
            });
        } else {
            BoundedQueue<std::pair<std::uint64_t, ExponentMatrix>> queue(static_cast<size_t>(cfg.threads) * 4);
            std::vector<std::thread> workers;
            workers.reserve(cfg.threads);
            for (unsigned w = 0; w < cfg.threads; ++w) {
                workers.emplace_back([&] {
                    WorkerScratch scratch;
                    Ticker wt = ticker;
                    while (auto item = queue.pop()) {
                        if (stop.load(std::memory_order_relaxed)) {
                            // Result list is already final; drain to unblock the producer.
                            collector.submit(item->first, {});
                            continue;
                        }
                        collector.submit(item->first, process_d(item->second, sh, scratch, wt));
                    }
                });
            }
            std::uint64_t seq = 0;
            dres = run_d_phase(cfg.s, cfg.q, cfg, ticker, [&](const ExponentMatrix& d) {
                if (stop.load(std::memory_order_relaxed)) return false;
                return queue.push({seq++, d});
            });
            queue.close();
            for (std::thread& t : workers) t.join();
        }
    } else if (tuples.empty() && !truncated.load()) {
        // No T candidates exist; drive the D stream anyway so stats are complete.
        dres = run_d_phase(cfg.s, cfg.q, cfg, ticker,
                           [&](const ExponentMatrix&) { return ticker.should_continue(); });
    }

    st.d_candidates = dres.yielded;
    st.d_prunes = dres.prunes;
    st.xy_branches = sh.xy_branches.load();
    st.xy_prunes = sh.xy_prunes.load();
    outcome.solutions = collector.take();
    st.solutions = outcome.solutions.size();
    st.truncated = truncated.load();
    st.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return outcome;
}

}  // namespace butson
