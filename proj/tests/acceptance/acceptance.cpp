// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "generators.hpp"
#include "gridlens/eval.hpp"
#include "gridlens/export.hpp"
#include "gridlens/factors.hpp"
#include "gridlens/graph.hpp"
#include "gridlens/metrics.hpp"
#include "gridlens/report.hpp"
#include "gridlens/sensitivity.hpp"

using namespace gridlens;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(const char* name, double budget_s, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = v.pass;
    if (budget_s > 0 && secs >= budget_s) {
        ok = false;
        v.detail += " (over budget)";
    }
    if (!ok) ++failures;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
    std::printf("%s  %-34s %10s  %s\n", ok ? "PASS" : "FAIL", name, timing, v.detail.c_str());
    std::fflush(stdout);
}

bool same_bits(const Value& a, const Value& b) {
    if (a.is_number() && b.is_number()) {
        const double x = a.number(), y = b.number();
        return std::memcmp(&x, &y, sizeof x) == 0;
    }
    return a == b;
}

ModelSlice slice_of(const Workbook& wb, const std::vector<CellAddress>& kpis) {
    return slice(wb, build_graph(wb), kpis);
}

std::vector<FactorSpec> variable_factors(const ModelSlice& s, const std::vector<FactorFileEntry>& entries) {
    std::vector<FactorSpec> out;
    for (auto& f : identify_variable_inputs(s, &entries))
        if (f.variable) out.push_back(std::move(f));
    return out;
}

constexpr std::uint64_t kCorpus = 1000;

}  // namespace

int main() {
    criterion("coupling-metrics-reproduction", 1.0, [] {
        auto f = testing::published_coupling_workbook();
        ModelSlice s = slice_of(f.workbook, f.formulas);
        auto rows = coupling_metrics(coupling_matrix(s));
        auto tables = metrics_tables(MetricsBundle{.coupling_metrics = rows});
        const Table* t = nullptr;
        for (const auto& x : tables)
            if (x.name == "coupling_metrics") t = &x;
        const std::string expected = testing::read_text(testing::fixture_dir() / "coupling_metrics_expected.csv");
        if (!t) return Verdict{false, "no coupling_metrics table"};
        const std::string got = render_csv(*t);

        // The same rows straight from the count matrix, without a workbook.
        auto m = testing::read_count_matrix(testing::fixture_dir() / "coupling_matrix.tsv");
        auto direct = coupling_metrics(make_coupling_matrix(m.codes, m.counts));
        std::size_t agree = 0;
        for (std::size_t i = 0; i < direct.size(); ++i) {
            const std::string name = f.workbook.discipline_of(m.codes[i]);
            for (const auto& r : rows)
                if (r.discipline == name && r.afferent == direct[i].afferent && r.efferent == direct[i].efferent) ++agree;
        }
        const bool ok = got == expected && rows.size() == 18 && agree == 18;
        return Verdict{ok, std::to_string(rows.size()) + " rows, " + std::to_string(agree) + " agree with the raw matrix" +
                               (got == expected ? ", CSV identical" : ", CSV differs")};
    });

    criterion("valency-identity", 0, [] {
        const double v = average_valency(2357, 3404);
        char rounded[16];
        std::snprintf(rounded, sizeof rounded, "%.2f", v);
        const bool exact = v == 6808.0 / 2357.0 && 2357.0 * v > 6807.999 && 2357.0 * v < 6808.001;
        return Verdict{exact && std::string(rounded) == "2.89", std::string("2E/N = ") + format_number(v) + " -> " + rounded};
    });

    std::vector<testing::GeneratedWorkbook> corpus;
    std::vector<std::vector<CellAddress>> corpus_kpis;

    criterion("slice-evaluation-equivalence", 60.0, [&] {
        std::size_t checked = 0, mismatches = 0;
        for (std::uint64_t seed = 0; seed < kCorpus; ++seed) {
            corpus.push_back(testing::generate_workbook(seed));
            const auto& g = corpus.back();
            corpus_kpis.push_back(testing::pick_kpis(g, seed, 1 + seed % 3));
            const auto& kpis = corpus_kpis.back();
            if (kpis.empty()) continue;
            ModelSlice s = slice_of(g.workbook, kpis);
            auto full = evaluate(g.workbook);
            auto part = evaluate(s.model);
            for (const auto& k : kpis) {
                ++checked;
                if (!same_bits(full.at(k), part.at(k))) ++mismatches;
            }
        }
        return Verdict{mismatches == 0 && corpus.size() >= 1000,
                       std::to_string(corpus.size()) + " workbooks, " + std::to_string(checked) + " KPIs, " +
                           std::to_string(mismatches) + " mismatches"};
    });

    criterion("slicer-reachability-oracle", 0, [&] {
        std::size_t slices = 0, mismatches = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (corpus_kpis[i].empty()) continue;
            ++slices;
            ModelSlice s = slice_of(corpus[i].workbook, corpus_kpis[i]);
            std::set<CellAddress> nodes(s.graph.nodes().begin(), s.graph.nodes().end());
            if (nodes != testing::reachable_cells(corpus[i], corpus_kpis[i])) ++mismatches;
        }
        return Verdict{slices > 0 && mismatches == 0,
                       std::to_string(slices) + " slices, " + std::to_string(mismatches) + " mismatches"};
    });

    criterion("design-balance-orthogonality", 5.0, [] {
        std::size_t designs = 0, bad = 0;
        std::string sizes;
        for (std::size_t n : supported_design_sizes(128)) {
            ++designs;
            sizes += (sizes.empty() ? "" : ",") + std::to_string(n);
            PBDesign d = pb_design_of_size(n, n - 1);
            for (std::size_t a = 0; a < d.columns(); ++a) {
                long sum = 0;
                for (std::size_t r = 0; r < n; ++r) sum += d.level(r, a);
                if (sum != 0) ++bad;
                for (std::size_t b = a + 1; b < d.columns(); ++b) {
                    long dot = 0;
                    for (std::size_t r = 0; r < n; ++r) dot += d.level(r, a) * d.level(r, b);
                    if (dot != 0) ++bad;
                }
            }
        }
        return Verdict{designs == 9 && bad == 0, "N in {" + sizes + "}, " + std::to_string(bad) + " violations"};
    });

    criterion("linear-effect-exactness", 30.0, [] {
        double worst = 0;
        std::size_t models = 0, peak_misses = 0;
        for (std::size_t k = 20; k <= 100; ++k) {
            auto m = testing::linear_model(k, 1000 + k);
            ModelSlice s = slice_of(m.workbook, {m.kpi});
            auto factors = variable_factors(s, m.factors);
            if (factors.size() != k) return Verdict{false, "factor count mismatch at k=" + std::to_string(k)};
            PBDesign d = pb_design(k);
            auto rep = normalize(estimate_effects(d, run_experiments(s, factors, d, {m.kpi}), factors));
            double peak = 0;
            for (std::size_t j = 0; j < k; ++j) {
                const double expected = m.coefficients[j] * (m.factors[j].max - m.factors[j].min);
                worst = std::max(worst, std::fabs(rep.raw[j][0] - expected) / std::fabs(expected));
                peak = std::max(peak, rep.normalized[j][0]);
            }
            if (peak != 100) ++peak_misses;
            ++models;
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu models (k=20..100), worst relative error %.2e", models, worst);
        return Verdict{worst <= 1e-9 && peak_misses == 0, buf};
    });

    criterion("side-effect-zeros", 0, [] {
        double worst = 0;
        std::size_t zeros = 0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto m = testing::two_kpi_model(5 + seed % 7, 4 + seed % 5, seed);
            ModelSlice s = slice_of(m.workbook, m.kpis);
            auto factors = variable_factors(s, m.factors);
            PBDesign d = pb_design(factors.size());
            auto rep = estimate_effects(d, run_experiments(s, factors, d, m.kpis), factors);
            for (std::size_t j = 0; j < factors.size(); ++j) {
                const std::size_t other = j < m.left ? 1 : 0;
                worst = std::max(worst, std::fabs(rep.raw[j][other]));
                ++zeros;
            }
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu off-slice effects, largest |effect| %.1e", zeros, worst);
        return Verdict{worst < 1e-12, buf};
    });

    criterion("scenario-throughput", 60.0, [] {
        auto w = testing::sized_workbook(1000, 2400, {{"SUM", 40}, {"IF", 40}}, 7);
        ModelSlice s = slice_of(w.workbook, {w.kpi});
        std::vector<FactorFileEntry> entries;
        for (const auto& a : w.inputs) entries.push_back({a, 0.5, 2.0, std::nullopt});
        auto factors = variable_factors(s, entries);
        PBDesign d = pb_design(factors.size());
        std::size_t runs = 0, failed = 0;
        while (runs < 2500) {
            auto r = run_experiments(s, factors, d, {w.kpi}, {1});
            runs += r.rows;
            failed += r.failed_runs.size();
        }
        return Verdict{s.cell_count() == 1000 && failed == 0,
                       std::to_string(runs) + " evaluations of a " + std::to_string(s.cell_count()) +
                           "-cell slice, 1 thread"};
    });

    criterion("evolution-count-deltas", 0, [] {
        auto before = testing::sized_workbook(1234, 2360, {{"SUM", 79}}, 1);
        auto after = testing::sized_workbook(2357, 3404, {{"SUM", 176}, {"IF", 99}, {"TYPE", 81}}, 2);
        auto r = compare_models(slice_of(before.workbook, {before.kpi}), slice_of(after.workbook, {after.kpi}));
        char buf[96];
        std::snprintf(buf, sizeof buf, "cells %+lld, references %+lld", r.cell_delta, r.reference_delta);
        return Verdict{r.cell_delta == 1123 && r.reference_delta == 1044 && r.before.cell_count == 1234 &&
                           r.after.reference_count == 3404,
                       buf};
    });

    std::printf("NOTE  confidential-model figures (per-discipline rows, variable ranking, function counts, "
                "input census) are not reproducible; covered by the property criteria above\n");
    std::printf("%s  %d failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
