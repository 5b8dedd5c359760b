// C interface implementation: thin exception-to-status translation over
// the C++ core.  All handles own plain copies, so they are safe to use
// from multiple threads as long as each handle stays on one thread.
#include "butson/butson.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/bmatrix.hpp"
#include "core/fixtures.hpp"
#include "core/io.hpp"
#include "core/petrescu.hpp"
#include "core/search.hpp"

struct bh_matrix {
    butson::ExponentMatrix m;
};

struct bh_report {
    // Either a Hadamard verification or a block audit.
    std::variant<butson::VerificationReport, butson::BlockReport> body;
    unsigned s = 0, q = 0;  // context for block-audit rendering
};

struct bh_search_result {
    butson::SearchOutcome outcome;
};

struct bh_matrix_list {
    std::vector<butson::ExponentMatrix> items;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

bh_status fail(bh_status code, const std::string& msg) {
    set_error(msg);
    return code;
}

// Runs `fn`, translating exceptions into status codes.
template <class Fn>
bh_status wrap(Fn&& fn) {
    try {
        return fn();
    } catch (const butson::ParseError& e) {
        return fail(BH_ERROR_PARSE, e.what());
    } catch (const butson::NotPetrescuForm& e) {
        return fail(BH_ERROR_NOT_PETRESCU, e.what());
    } catch (const std::overflow_error& e) {
        return fail(BH_ERROR_OVERFLOW, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(BH_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(BH_ERROR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(BH_ERROR_INTERNAL, e.what());
    }
}

bh_status require(bool cond, const char* what) {
    if (cond) return BH_OK;
    return fail(BH_ERROR_INVALID_ARGUMENT, std::string("null argument: ") + what);
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* bh_last_error(void) { return g_last_error.c_str(); }

const char* bh_version(void) { return "1.0.0"; }

/* ------------------------------------------------------------------ */

bh_status bh_matrix_create(uint32_t q, uint32_t n_rows, uint32_t n_cols, const int32_t* entries,
                           bh_matrix** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    return wrap([&] {
        butson::ExponentMatrix m(q, n_rows, n_cols);
        if (entries != nullptr)
            for (uint32_t i = 0; i < n_rows; ++i)
                for (uint32_t j = 0; j < n_cols; ++j)
                    m.set(i, j, entries[static_cast<size_t>(i) * n_cols + j]);
        *out = new bh_matrix{std::move(m)};
        return BH_OK;
    });
}

void bh_matrix_free(bh_matrix* m) { delete m; }

bh_status bh_matrix_clone(const bh_matrix* m, bh_matrix** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(m != nullptr, "m"); st != BH_OK) return st;
    return wrap([&] {
        *out = new bh_matrix{m->m};
        return BH_OK;
    });
}

uint32_t bh_matrix_q(const bh_matrix* m) { return m == nullptr ? 0 : m->m.q(); }
uint32_t bh_matrix_rows(const bh_matrix* m) { return m == nullptr ? 0 : m->m.n_rows(); }
uint32_t bh_matrix_cols(const bh_matrix* m) { return m == nullptr ? 0 : m->m.n_cols(); }

bh_status bh_matrix_get(const bh_matrix* m, uint32_t i, uint32_t j, int32_t* out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = 0;
    if (bh_status st = require(m != nullptr, "m"); st != BH_OK) return st;
    return wrap([&] {
        *out = m->m.at(i, j);
        return BH_OK;
    });
}

bh_status bh_matrix_set(bh_matrix* m, uint32_t i, uint32_t j, int32_t e) {
    if (bh_status st = require(m != nullptr, "m"); st != BH_OK) return st;
    return wrap([&] {
        m->m.set(i, j, e);
        return BH_OK;
    });
}

bh_status bh_matrix_equal(const bh_matrix* a, const bh_matrix* b, int* out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = 0;
    if (bh_status st = require(a != nullptr, "a"); st != BH_OK) return st;
    if (bh_status st = require(b != nullptr, "b"); st != BH_OK) return st;
    *out = (a->m == b->m) ? 1 : 0;
    return BH_OK;
}

bh_status bh_matrix_parse(const char* text, uint32_t default_q, bh_matrix** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(text != nullptr, "text"); st != BH_OK) return st;
    return wrap([&] {
        *out = new bh_matrix{butson::parse_matrix(text, default_q)};
        return BH_OK;
    });
}

bh_status bh_matrix_serialize(const bh_matrix* m, bh_format format, char** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(m != nullptr, "m"); st != BH_OK) return st;
    return wrap([&] {
        std::string text =
            format == BH_FORMAT_JSON ? butson::serialize_structured(m->m) : butson::serialize_grid(m->m);
        *out = copy_string(text);
        return BH_OK;
    });
}

void bh_string_free(char* s) { delete[] s; }

bh_status bh_matrix_builtin(const char* name, bh_matrix** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(name != nullptr, "name"); st != BH_OK) return st;
    return wrap([&] {
        if (std::strcmp(name, "w19") == 0) {
            *out = new bh_matrix{butson::w19()};
            return BH_OK;
        }
        return fail(BH_ERROR_INVALID_ARGUMENT, std::string("unknown builtin matrix: ") + name);
    });
}

bh_status bh_matrix_fourier(uint32_t n, bh_matrix** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    return wrap([&] {
        *out = new bh_matrix{butson::fourier(n)};
        return BH_OK;
    });
}

bh_status bh_matrix_dephase(const bh_matrix* m, bh_matrix** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(m != nullptr, "m"); st != BH_OK) return st;
    return wrap([&] {
        *out = new bh_matrix{butson::dephase(m->m)};
        return BH_OK;
    });
}

bh_status bh_matrix_conj_transpose(const bh_matrix* m, bh_matrix** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(m != nullptr, "m"); st != BH_OK) return st;
    return wrap([&] {
        *out = new bh_matrix{butson::conj_transpose(m->m)};
        return BH_OK;
    });
}

bh_status bh_matrix_checksum(const bh_matrix* m, uint64_t* out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = 0;
    if (bh_status st = require(m != nullptr, "m"); st != BH_OK) return st;
    *out = butson::matrix_checksum(m->m);
    return BH_OK;
}

/* ------------------------------------------------------------------ */

bh_status bh_verify(const bh_matrix* m, bh_report** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(m != nullptr, "m"); st != BH_OK) return st;
    return wrap([&] {
        *out = new bh_report{butson::verify_bh(m->m), 0, m->m.q()};
        return BH_OK;
    });
}

bh_status bh_check_blocks(const bh_matrix* m, uint32_t s, bh_report** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(m != nullptr, "m"); st != BH_OK) return st;
    return wrap([&] {
        *out = new bh_report{butson::check_blocks(m->m, s), s, m->m.q()};
        return BH_OK;
    });
}

int bh_report_passed(const bh_report* r) {
    if (r == nullptr) return 0;
    if (const auto* v = std::get_if<butson::VerificationReport>(&r->body)) return v->is_hadamard ? 1 : 0;
    return std::get<butson::BlockReport>(r->body).passed ? 1 : 0;
}

bh_status bh_report_render_text(const bh_report* r, char** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(r != nullptr, "r"); st != BH_OK) return st;
    return wrap([&] {
        if (const auto* v = std::get_if<butson::VerificationReport>(&r->body))
            *out = copy_string(butson::render_text(*v));
        else
            *out = copy_string(butson::render_text(std::get<butson::BlockReport>(r->body), r->s, r->q));
        return BH_OK;
    });
}

bh_status bh_report_render_json(const bh_report* r, char** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(r != nullptr, "r"); st != BH_OK) return st;
    return wrap([&] {
        if (const auto* v = std::get_if<butson::VerificationReport>(&r->body))
            *out = copy_string(butson::render_json(*v));
        else
            *out = copy_string(butson::render_json(std::get<butson::BlockReport>(r->body), r->s, r->q));
        return BH_OK;
    });
}

void bh_report_free(bh_report* r) { delete r; }

/* ------------------------------------------------------------------ */

bh_status bh_xy_sum(const bh_matrix* t, const bh_matrix* d, uint32_t s, int64_t** out_coeffs,
                    size_t* out_len) {
    if (bh_status st = require(out_coeffs != nullptr, "out_coeffs"); st != BH_OK) return st;
    *out_coeffs = nullptr;
    if (bh_status st = require(out_len != nullptr, "out_len"); st != BH_OK) return st;
    *out_len = 0;
    if (bh_status st = require(t != nullptr, "t"); st != BH_OK) return st;
    if (bh_status st = require(d != nullptr, "d"); st != BH_OK) return st;
    return wrap([&] {
        auto value = butson::compute_x_plus_y(t->m, d->m, s);
        if (const auto* df = std::get_if<butson::DivisionFailure>(&value))
            return fail(BH_ERROR_NOT_DIVISIBLE,
                        "entry (" + std::to_string(df->i) + ", " + std::to_string(df->j) +
                            ") of T D* T* is not divisible by s+1");
        const butson::CycMatrix& m = std::get<butson::CycMatrix>(value);
        const uint32_t q = m.q();
        const size_t len = static_cast<size_t>(s) * s * q;
        int64_t* coeffs = new int64_t[len];
        for (uint32_t i = 0; i < s; ++i)
            for (uint32_t j = 0; j < s; ++j) {
                std::vector<butson::i64> can = m.at(i, j).canonical();
                int64_t* slot = coeffs + (static_cast<size_t>(i) * s + j) * q;
                for (uint32_t k = 0; k < q; ++k) slot[k] = k < can.size() ? can[k] : 0;
            }
        *out_coeffs = coeffs;
        *out_len = len;
        return BH_OK;
    });
}

void bh_coeffs_free(int64_t* coeffs) { delete[] coeffs; }

bh_status bh_decompose_pair_sum(uint32_t q, const int64_t* coeffs, size_t coeffs_len,
                                int32_t** out_pairs, size_t* out_count) {
    if (bh_status st = require(out_pairs != nullptr, "out_pairs"); st != BH_OK) return st;
    *out_pairs = nullptr;
    if (bh_status st = require(out_count != nullptr, "out_count"); st != BH_OK) return st;
    *out_count = 0;
    if (bh_status st = require(coeffs != nullptr, "coeffs"); st != BH_OK) return st;
    return wrap([&] {
        if (coeffs_len != q)
            return fail(BH_ERROR_INVALID_ARGUMENT, "coeffs_len must equal q");
        std::vector<butson::i64> cs(coeffs, coeffs + coeffs_len);
        butson::CycElem target(q, cs);
        auto pairs = butson::decompose_pair_sum(target);
        int32_t* out = new int32_t[pairs.size() * 2];
        for (size_t k = 0; k < pairs.size(); ++k) {
            out[2 * k] = pairs[k].first;
            out[2 * k + 1] = pairs[k].second;
        }
        *out_pairs = out;
        *out_count = pairs.size();
        return BH_OK;
    });
}

void bh_pairs_free(int32_t* pairs) { delete[] pairs; }

/* ------------------------------------------------------------------ */

void bh_search_config_init(bh_search_config* cfg) {
    if (cfg == nullptr) return;
    cfg->s = 6;
    cfg->q = 6;
    cfg->max_d_candidates = 0;
    cfg->max_t_candidates = 0;
    cfg->max_solutions = 1;
    cfg->deterministic_order = 1;
    cfg->time_budget_seconds = 0;
    cfg->threads = 1;
    cfg->pruning_enabled = 1;
}

bh_status bh_search_run(const bh_search_config* cfg, bh_search_result** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(cfg != nullptr, "cfg"); st != BH_OK) return st;
    return wrap([&] {
        butson::SearchConfig c;
        c.s = cfg->s;
        c.q = cfg->q;
        c.max_d_candidates = cfg->max_d_candidates;
        c.max_t_candidates = cfg->max_t_candidates;
        c.max_solutions = cfg->max_solutions;
        c.deterministic_order = cfg->deterministic_order != 0;
        c.time_budget_seconds = cfg->time_budget_seconds;
        c.threads = cfg->threads;
        c.pruning_enabled = cfg->pruning_enabled != 0;
        *out = new bh_search_result{butson::run_pipeline(c)};
        return BH_OK;
    });
}

size_t bh_search_result_count(const bh_search_result* r) {
    return r == nullptr ? 0 : r->outcome.solutions.size();
}

bh_status bh_search_result_matrix(const bh_search_result* r, size_t index, bh_matrix** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(r != nullptr, "r"); st != BH_OK) return st;
    if (index >= r->outcome.solutions.size())
        return fail(BH_ERROR_INVALID_ARGUMENT, "solution index out of range");
    return wrap([&] {
        *out = new bh_matrix{r->outcome.solutions[index].matrix};
        return BH_OK;
    });
}

bh_status bh_search_result_block(const bh_search_result* r, size_t index, char block, bh_matrix** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(r != nullptr, "r"); st != BH_OK) return st;
    if (index >= r->outcome.solutions.size())
        return fail(BH_ERROR_INVALID_ARGUMENT, "solution index out of range");
    const butson::PetrescuBlocks& b = r->outcome.solutions[index].blocks;
    const butson::ExponentMatrix* src = nullptr;
    switch (block) {
        case 'X': src = &b.X; break;
        case 'Y': src = &b.Y; break;
        case 'T': src = &b.T; break;
        case 'D': src = &b.D; break;
        default: return fail(BH_ERROR_INVALID_ARGUMENT, "block must be one of 'X', 'Y', 'T', 'D'");
    }
    return wrap([&] {
        *out = new bh_matrix{*src};
        return BH_OK;
    });
}

bh_status bh_search_result_stats_json(const bh_search_result* r, char** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(r != nullptr, "r"); st != BH_OK) return st;
    return wrap([&] {
        const butson::SearchStats& st = r->outcome.stats;
        nlohmann::ordered_json doc;
        doc["format_version"] = 1;
        doc["d_candidates"] = st.d_candidates;
        doc["t_candidates"] = st.t_candidates;
        doc["xy_branches"] = st.xy_branches;
        doc["prunes"] = {{"d", st.d_prunes}, {"t", st.t_prunes}, {"xy", st.xy_prunes}};
        doc["solutions"] = st.solutions;
        doc["elapsed_ms"] = st.elapsed_ms;
        doc["truncated"] = st.truncated;
        *out = copy_string(doc.dump(2) + "\n");
        return BH_OK;
    });
}

int bh_search_result_truncated(const bh_search_result* r) {
    return (r != nullptr && r->outcome.stats.truncated) ? 1 : 0;
}

void bh_search_result_free(bh_search_result* r) { delete r; }

/* ------------------------------------------------------------------ */

bh_status bh_enumerate_t(uint32_t s, uint32_t q, uint64_t max_candidates, bh_matrix_list** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    return wrap([&] {
        butson::SearchConfig cfg;
        cfg.s = s;
        cfg.q = q;
        cfg.max_t_candidates = max_candidates;
        auto list = std::make_unique<bh_matrix_list>();
        butson::enumerate_t(s, q, cfg, [&](const butson::ExponentMatrix& m) {
            list->items.push_back(m);
            return true;
        });
        *out = list.release();
        return BH_OK;
    });
}

size_t bh_matrix_list_count(const bh_matrix_list* l) { return l == nullptr ? 0 : l->items.size(); }

bh_status bh_matrix_list_get(const bh_matrix_list* l, size_t index, bh_matrix** out) {
    if (bh_status st = require(out != nullptr, "out"); st != BH_OK) return st;
    *out = nullptr;
    if (bh_status st = require(l != nullptr, "l"); st != BH_OK) return st;
    if (index >= l->items.size()) return fail(BH_ERROR_INVALID_ARGUMENT, "list index out of range");
    return wrap([&] {
        *out = new bh_matrix{l->items[index]};
        return BH_OK;
    });
}

void bh_matrix_list_free(bh_matrix_list* l) { delete l; }

}  // extern "C"
