#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "gridlens/error.hpp"
#include "gridlens/eval.hpp"
#include "gridlens/sensitivity.hpp"

namespace gridlens {

namespace {

struct RunOutcome {
    std::vector<double> values;
    std::optional<ErrorKind> failure;
};

RunOutcome read_kpis(const std::vector<Value>& values, const std::vector<std::size_t>& kpi_slots) {
    RunOutcome out;
    out.values.reserve(kpi_slots.size());
    for (std::size_t s : kpi_slots) {
        const Value& v = values[s];
        if (v.is_number()) {
            out.values.push_back(v.number());
            continue;
        }
        out.failure = v.is_error() ? v.error() : ErrorKind::Value;
        out.values.clear();
        return out;
    }
    return out;
}

}  // namespace

ResponseMatrix run_experiments(const ModelSlice& s, const std::vector<FactorSpec>& factors, const PBDesign& d,
                               const std::vector<CellAddress>& kpis, const ExperimentOptions& options) {
    if (factors.size() != d.factors())
        throw DesignMismatchError(std::to_string(factors.size()) + " factors for a design with " +
                                  std::to_string(d.factors()) + " factor columns");
    for (const auto& f : factors) {
        if (!s.inputs.contains(f.cell))
            throw DesignMismatchError("factor " + f.name + " (" + format_address(f.cell) + ") is not an input of the slice");
        if (!f.variable || !(f.min < f.max))
            throw DesignMismatchError("factor " + f.name + " is not variable");
    }
    for (const auto& k : kpis)
        if (std::find(s.kpis.begin(), s.kpis.end(), k) == s.kpis.end())
            throw UnknownKpiError("KPI " + format_address(k) + " is not a KPI of the slice");

    const CompiledModel model(s.model);
    std::vector<std::size_t> factor_slots;
    for (const auto& f : factors) {
        auto slot = model.slot_of(f.cell);
        if (!slot) throw DesignMismatchError("factor " + f.name + " is not part of the model");
        factor_slots.push_back(*slot);
    }
    std::vector<std::size_t> kpi_slots;
    for (const auto& k : kpis) kpi_slots.push_back(*model.slot_of(k));

    ResponseMatrix r;
    r.rows = d.runs();
    r.kpis = kpis;
    {
        std::vector<Value> values;
        model.evaluate_into({}, values);
        for (std::size_t s_ : kpi_slots)
            r.baseline.push_back(values[s_].is_number() ? values[s_].number()
                                                        : std::numeric_limits<double>::quiet_NaN());
    }

    std::vector<RunOutcome> outcomes(d.runs());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        std::vector<Value> values;
        std::vector<std::pair<std::size_t, Value>> overrides(factors.size());
        for (std::size_t run = next++; run < d.runs(); run = next++) {
            for (std::size_t j = 0; j < factors.size(); ++j)
                overrides[j] = {factor_slots[j], Value(d.level(run, j) > 0 ? factors[j].max : factors[j].min)};
            model.evaluate_into(overrides, values);
            outcomes[run] = read_kpis(values, kpi_slots);
        }
    };
    std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(1, d.runs()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
    }

    r.values.resize(d.runs());
    for (std::size_t run = 0; run < d.runs(); ++run) {
        if (outcomes[run].failure) r.failed_runs.push_back({run, *outcomes[run].failure});
        else r.values[run] = std::move(outcomes[run].values);
    }
    return r;
}

SensitivityReport estimate_effects(const PBDesign& d, const ResponseMatrix& r, const std::vector<FactorSpec>& factors) {
    if (!r.failed_runs.empty())
        throw IncompleteRunsError(std::to_string(r.failed_runs.size()) + " run(s) failed; effects not estimated");
    if (r.rows != d.runs() || r.values.size() != d.runs())
        throw DesignMismatchError("response rows do not match design runs");
    if (factors.size() != d.factors()) throw DesignMismatchError("factor list does not match the design");

    const std::size_t kpis = r.kpis.size();
    const double scale = 2.0 / static_cast<double>(d.runs());
    auto effect = [&](std::size_t column, std::size_t k) {
        double sum = 0;
        for (std::size_t i = 0; i < d.runs(); ++i) sum += d.level(i, column) * r.values[i][k];
        return scale * sum;
    };

    SensitivityReport rep;
    rep.factors = factors;
    rep.kpis = r.kpis;
    rep.baseline = r.baseline;
    rep.raw.assign(d.factors(), std::vector<double>(kpis));
    rep.dummy.assign(d.dummy_columns(), std::vector<double>(kpis));
    for (std::size_t j = 0; j < d.factors(); ++j)
        for (std::size_t k = 0; k < kpis; ++k) rep.raw[j][k] = effect(j, k);
    for (std::size_t j = 0; j < d.dummy_columns(); ++j)
        for (std::size_t k = 0; k < kpis; ++k) rep.dummy[j][k] = effect(d.factors() + j, k);
    rep.normalized.assign(d.factors(), std::vector<double>(kpis, 0.0));
    return rep;
}

SensitivityReport normalize(SensitivityReport report) {
    const std::size_t kpis = report.kpis.size();
    report.normalized.assign(report.raw.size(), std::vector<double>(kpis, 0.0));
    for (std::size_t k = 0; k < kpis; ++k) {
        double peak = 0;
        for (const auto& row : report.raw) peak = std::max(peak, std::fabs(row[k]));
        if (peak == 0) continue;
        for (std::size_t j = 0; j < report.raw.size(); ++j)
            report.normalized[j][k] = std::fabs(report.raw[j][k]) / peak * 100.0;
    }
    return report;
}

std::vector<std::size_t> report_order(const SensitivityReport& r) {
    std::vector<std::size_t> idx(r.factors.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    if (r.kpis.empty()) return idx;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return r.normalized[a][0] > r.normalized[b][0]; });
    return idx;
}

}  // namespace gridlens
