// Command-line front end over the C interface (butson/butson.h).
//
// Exit codes: 0 success / property holds, 1 property fails, 2 usage or
// input problems, 3 search stopped by the time budget.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "butson/butson.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTruncated = 3;

struct MatrixDeleter {
    void operator()(bh_matrix* m) const { bh_matrix_free(m); }
};
struct ReportDeleter {
    void operator()(bh_report* r) const { bh_report_free(r); }
};
struct ResultDeleter {
    void operator()(bh_search_result* r) const { bh_search_result_free(r); }
};
struct ListDeleter {
    void operator()(bh_matrix_list* l) const { bh_matrix_list_free(l); }
};
using matrix_ptr = std::unique_ptr<bh_matrix, MatrixDeleter>;
using report_ptr = std::unique_ptr<bh_report, ReportDeleter>;
using result_ptr = std::unique_ptr<bh_search_result, ResultDeleter>;
using list_ptr = std::unique_ptr<bh_matrix_list, ListDeleter>;

// Owned C string from the library.
std::string take_string(char* s) {
    std::string out = s != nullptr ? s : "";
    bh_string_free(s);
    return out;
}

int usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return kExitUsage;
}

bool read_input(const std::string& path, std::string& out) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        out = ss.str();
        return true;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

// Loads `spec` (a path, "-" for stdin, or "@name" for a builtin).  On
// failure prints a message and stores a process exit code in `rc`.
matrix_ptr load_matrix(const std::string& spec, uint32_t q, bool q_given, int& rc) {
    bh_matrix* raw = nullptr;
    if (!spec.empty() && spec[0] == '@') {
        if (bh_matrix_builtin(spec.c_str() + 1, &raw) != BH_OK) {
            rc = usage_error(bh_last_error());
            return nullptr;
        }
    } else {
        std::string text;
        if (!read_input(spec, text)) {
            rc = usage_error("cannot read input: " + spec);
            return nullptr;
        }
        if (bh_matrix_parse(text.c_str(), q_given ? q : 0, &raw) != BH_OK) {
            rc = usage_error(bh_last_error());
            return nullptr;
        }
    }
    matrix_ptr m(raw);
    if (q_given && bh_matrix_q(m.get()) != q) {
        rc = usage_error("input declares q " + std::to_string(bh_matrix_q(m.get())) +
                         " but --q " + std::to_string(q) + " was given");
        return nullptr;
    }
    rc = kExitOk;
    return m;
}

bool write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return out.good();
}

int cmd_verify(const std::string& input, uint32_t q, bool q_given, bool as_json) {
    int rc = 0;
    matrix_ptr m = load_matrix(input, q, q_given, rc);
    if (!m) return rc;
    bh_report* raw = nullptr;
    if (bh_verify(m.get(), &raw) != BH_OK) return usage_error(bh_last_error());
    report_ptr rep(raw);
    char* text = nullptr;
    if ((as_json ? bh_report_render_json : bh_report_render_text)(rep.get(), &text) != BH_OK)
        return usage_error(bh_last_error());
    std::cout << take_string(text);
    return bh_report_passed(rep.get()) ? kExitOk : kExitFailed;
}

int cmd_dephase(const std::string& input, uint32_t q, bool q_given, const std::string& format,
                const std::string& output) {
    int rc = 0;
    matrix_ptr m = load_matrix(input, q, q_given, rc);
    if (!m) return rc;
    bh_matrix* raw = nullptr;
    if (bh_matrix_dephase(m.get(), &raw) != BH_OK) return usage_error(bh_last_error());
    matrix_ptr d(raw);
    char* text = nullptr;
    bh_format fmt = format == "json" ? BH_FORMAT_JSON : BH_FORMAT_GRID;
    if (bh_matrix_serialize(d.get(), fmt, &text) != BH_OK) return usage_error(bh_last_error());
    if (!write_output(output, take_string(text))) return usage_error("cannot write output: " + output);
    return kExitOk;
}

int cmd_blocks(const std::string& input, uint32_t s, uint32_t q, bool q_given, bool as_json) {
    int rc = 0;
    matrix_ptr m = load_matrix(input, q, q_given, rc);
    if (!m) return rc;
    bh_report* raw = nullptr;
    bh_status st = bh_check_blocks(m.get(), s, &raw);
    if (st == BH_ERROR_NOT_PETRESCU) {
        // Structural failure, with the offending position in the message.
        if (as_json) {
            nlohmann::ordered_json doc;
            doc["format_version"] = 1;
            doc["check"] = "blocks";
            doc["passed"] = false;
            doc["error"] = bh_last_error();
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cout << "block checks: FAIL (" << bh_last_error() << ")\n";
        }
        return kExitFailed;
    }
    if (st != BH_OK) return usage_error(bh_last_error());
    report_ptr rep(raw);
    char* text = nullptr;
    if ((as_json ? bh_report_render_json : bh_report_render_text)(rep.get(), &text) != BH_OK)
        return usage_error(bh_last_error());
    std::cout << take_string(text);
    return bh_report_passed(rep.get()) ? kExitOk : kExitFailed;
}

int cmd_search(const bh_search_config& cfg, const std::string& out_prefix, bool as_json) {
    bh_search_result* raw = nullptr;
    if (bh_search_run(&cfg, &raw) != BH_OK) return usage_error(bh_last_error());
    result_ptr res(raw);

    const size_t count = bh_search_result_count(res.get());
    std::vector<std::string> files;
    nlohmann::ordered_json solutions_json = nlohmann::ordered_json::array();
    for (size_t i = 0; i < count; ++i) {
        bh_matrix* mraw = nullptr;
        if (bh_search_result_matrix(res.get(), i, &mraw) != BH_OK) return usage_error(bh_last_error());
        matrix_ptr m(mraw);
        char* text = nullptr;
        if (!out_prefix.empty() || as_json) {
            if (bh_matrix_serialize(m.get(), BH_FORMAT_JSON, &text) != BH_OK)
                return usage_error(bh_last_error());
            std::string json_text = take_string(text);
            if (!out_prefix.empty()) {
                char suffix[32];
                std::snprintf(suffix, sizeof suffix, "%03zu.json", i);
                std::string path = out_prefix + suffix;
                std::ofstream f(path, std::ios::binary);
                if (!f || !(f << json_text)) return usage_error("cannot write solution file: " + path);
                files.push_back(path);
            }
            if (as_json) solutions_json.push_back(nlohmann::ordered_json::parse(json_text));
        }
        if (out_prefix.empty() && !as_json) {
            if (bh_matrix_serialize(m.get(), BH_FORMAT_GRID, &text) != BH_OK)
                return usage_error(bh_last_error());
            std::cout << take_string(text) << "\n";
        }
    }

    char* stats_raw = nullptr;
    if (bh_search_result_stats_json(res.get(), &stats_raw) != BH_OK) return usage_error(bh_last_error());
    std::string stats_text = take_string(stats_raw);

    if (as_json) {
        nlohmann::ordered_json doc;
        doc["format_version"] = 1;
        doc["stats"] = nlohmann::ordered_json::parse(stats_text);
        if (!out_prefix.empty()) doc["files"] = files;
        doc["solutions"] = std::move(solutions_json);
        std::cout << doc.dump(2) << "\n";
    } else {
        auto stats = nlohmann::ordered_json::parse(stats_text);
        std::cerr << "solutions " << count << ", D candidates " << stats["d_candidates"]
                  << ", T candidates " << stats["t_candidates"] << ", elapsed "
                  << stats["elapsed_ms"] << " ms"
                  << (bh_search_result_truncated(res.get()) ? " (budget exhausted)" : "") << "\n";
        for (const std::string& f : files) std::cerr << "wrote " << f << "\n";
    }
    return bh_search_result_truncated(res.get()) ? kExitTruncated : kExitOk;
}

int cmd_gen_t(uint32_t s, uint32_t q, uint64_t max, bool count_only, bool as_json) {
    bh_matrix_list* raw = nullptr;
    if (bh_enumerate_t(s, q, max, &raw) != BH_OK) return usage_error(bh_last_error());
    list_ptr list(raw);
    const size_t count = bh_matrix_list_count(list.get());
    if (count_only) {
        std::cout << count << "\n";
        return kExitOk;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (size_t i = 0; i < count; ++i) {
        bh_matrix* mraw = nullptr;
        if (bh_matrix_list_get(list.get(), i, &mraw) != BH_OK) return usage_error(bh_last_error());
        matrix_ptr m(mraw);
        char* text = nullptr;
        if (bh_matrix_serialize(m.get(), as_json ? BH_FORMAT_JSON : BH_FORMAT_GRID, &text) != BH_OK)
            return usage_error(bh_last_error());
        if (as_json)
            arr.push_back(nlohmann::ordered_json::parse(take_string(text)));
        else
            std::cout << take_string(text) << "\n";
    }
    if (as_json) {
        nlohmann::ordered_json doc;
        doc["format_version"] = 1;
        doc["count"] = count;
        doc["candidates"] = std::move(arr);
        std::cout << doc.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_decompose(uint32_t q, const std::vector<int64_t>& coeffs, bool as_json) {
    if (coeffs.size() != q)
        return usage_error("expected " + std::to_string(q) + " coefficients, got " +
                           std::to_string(coeffs.size()));
    int32_t* pairs = nullptr;
    size_t count = 0;
    if (bh_decompose_pair_sum(q, coeffs.data(), coeffs.size(), &pairs, &count) != BH_OK)
        return usage_error(bh_last_error());
    if (as_json) {
        nlohmann::ordered_json doc;
        doc["format_version"] = 1;
        doc["q"] = q;
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (size_t k = 0; k < count; ++k)
            arr.push_back(nlohmann::ordered_json::array({pairs[2 * k], pairs[2 * k + 1]}));
        doc["pairs"] = std::move(arr);
        std::cout << doc.dump(2) << "\n";
    } else {
        for (size_t k = 0; k < count; ++k)
            std::cout << pairs[2 * k] << " " << pairs[2 * k + 1] << "\n";
    }
    bh_pairs_free(pairs);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact tools for Butson-type complex Hadamard matrices"};
    app.set_version_flag("--version", std::string(bh_version()));
    app.require_subcommand(1);

    // verify
    std::string v_input = "-";
    uint32_t v_q = 0;
    bool v_json = false;
    auto* verify = app.add_subcommand("verify", "Exact Butson-Hadamard test for a matrix");
    verify->add_option("input", v_input, "matrix file, '-' for stdin, or @w19")->capture_default_str();
    auto* v_qopt = verify->add_option("--q", v_q, "modulus for headerless grid input");
    verify->add_flag("--json", v_json, "machine-readable report");

    // dephase
    std::string d_input = "-", d_format = "grid", d_output = "-";
    uint32_t d_q = 0;
    auto* dephase = app.add_subcommand("dephase", "Normalize first row and column to exponent zero");
    dephase->add_option("input", d_input, "matrix file, '-' for stdin, or @w19")->capture_default_str();
    auto* d_qopt = dephase->add_option("--q", d_q, "modulus for headerless grid input");
    dephase->add_option("--format", d_format, "output format: grid or json")
        ->check(CLI::IsMember({"grid", "json"}))
        ->capture_default_str();
    dephase->add_option("-o,--output", d_output, "output file ('-' for stdout)")->capture_default_str();

    // blocks
    std::string b_input = "-";
    uint32_t b_s = 6, b_q = 0;
    bool b_json = false;
    auto* blocks = app.add_subcommand("blocks", "Audit the Petrescu block identities of an order-3s+1 matrix");
    blocks->add_option("input", b_input, "matrix file, '-' for stdin, or @w19")->capture_default_str();
    blocks->add_option("--s", b_s, "block parameter (order is 3s+1)")->capture_default_str();
    auto* b_qopt = blocks->add_option("--q", b_q, "modulus for headerless grid input");
    blocks->add_flag("--json", b_json, "machine-readable report");

    // search
    bh_search_config s_cfg;
    bh_search_config_init(&s_cfg);
    uint64_t s_max_solutions = 1, s_max_d = 0, s_max_t = 0;
    uint32_t s_s = 6, s_q = 6, s_threads = 1;
    double s_budget = 0;
    bool s_no_prune = false, s_unordered = false, s_json = false;
    std::string s_out;
    auto* search = app.add_subcommand("search", "Search for Butson-Hadamard matrices in Petrescu block form");
    search->add_option("--s", s_s, "block parameter (order is 3s+1)")->capture_default_str();
    search->add_option("--q", s_q, "root-of-unity modulus (must be even)")->capture_default_str();
    search->add_option("--max-solutions", s_max_solutions, "stop after this many solutions (0 = all)")
        ->capture_default_str();
    search->add_option("--max-d", s_max_d, "limit on D candidates (0 = all)");
    search->add_option("--max-t", s_max_t, "limit on T candidates (0 = all)");
    search->add_option("--budget", s_budget, "time budget in seconds (0 = none)");
    search->add_option("--threads", s_threads, "worker threads")->capture_default_str();
    search->add_flag("--no-prune", s_no_prune, "disable pruning heuristics (debugging; tiny s only)");
    search->add_flag("--unordered", s_unordered, "drop the canonical result order");
    search->add_option("--out", s_out, "write each solution to <prefix>NNN.json");
    search->add_flag("--json", s_json, "single JSON document with stats and solutions");

    // gen-t
    uint32_t g_s = 0, g_q = 0;
    uint64_t g_max = 0;
    bool g_count_only = false, g_json = false;
    auto* gen_t = app.add_subcommand("gen-t", "Enumerate T-block candidates");
    gen_t->add_option("--s", g_s, "block parameter")->required();
    gen_t->add_option("--q", g_q, "root-of-unity modulus")->required();
    gen_t->add_option("--max", g_max, "stop after this many candidates (0 = all)");
    gen_t->add_flag("--count-only", g_count_only, "print only the number of candidates");
    gen_t->add_flag("--json", g_json, "machine-readable output");

    // decompose
    uint32_t x_q = 0;
    std::vector<int64_t> x_coeffs;
    bool x_json = false;
    auto* decompose = app.add_subcommand("decompose", "Split a value into sums of two q-th roots");
    decompose->add_option("--q", x_q, "root-of-unity modulus")->required();
    decompose->add_option("coeffs", x_coeffs, "q coefficients, coefficient k multiplying zeta^k")
        ->expected(-1);
    decompose->add_flag("--json", x_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (verify->parsed()) return cmd_verify(v_input, v_q, v_qopt->count() > 0, v_json);
    if (dephase->parsed()) return cmd_dephase(d_input, d_q, d_qopt->count() > 0, d_format, d_output);
    if (blocks->parsed()) return cmd_blocks(b_input, b_s, b_q, b_qopt->count() > 0, b_json);
    if (search->parsed()) {
        s_cfg.s = s_s;
        s_cfg.q = s_q;
        s_cfg.max_solutions = s_max_solutions;
        s_cfg.max_d_candidates = s_max_d;
        s_cfg.max_t_candidates = s_max_t;
        s_cfg.time_budget_seconds = s_budget;
        s_cfg.threads = s_threads;
        s_cfg.pruning_enabled = s_no_prune ? 0 : 1;
        s_cfg.deterministic_order = s_unordered ? 0 : 1;
        return cmd_search(s_cfg, s_out, s_json);
    }
    if (gen_t->parsed()) return cmd_gen_t(g_s, g_q, g_max, g_count_only, g_json);
    if (decompose->parsed()) return cmd_decompose(x_q, x_coeffs, x_json);
    return kExitUsage;
}
