#include "lsde/catalog.hpp"
#include "lsde/integrator.hpp"
#include "lsde/lie.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

using namespace lsde;

namespace {

double seconds(const std::function<void()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    body();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool same(const std::vector<Trajectory>& a, const std::vector<Trajectory>& b)
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].states != b[i].states) {
            return false;
        }
    }
    return true;
}

}  // namespace

int main()
{
    std::printf("threads: %d\n", thread_cap());
    std::printf("%-22s %10s %10s %8s %s\n", "kernel", "serial_s", "parallel_s", "speedup", "identical");
    bool ok = true;
    for (const char* name : {"riccati", "corona", "lv-diffusion"}) {
        const CatalogEntry e = make_entry(name);
        const StateVector x0 = StateVector::make(e.default_target, e.sys.domain());
        EnsembleSpec spec;
        spec.count = 256;
        spec.base_steps = 1000;
        std::vector<Trajectory> serial;
        std::vector<Trajectory> parallel;
        const double ts = seconds([&] { serial = run_ensemble(e.sys, x0, spec, Execution::Serial); });
        const double tp = seconds([&] { parallel = run_ensemble(e.sys, x0, spec, Execution::Parallel); });
        const bool eq = same(serial, parallel);
        ok = ok && eq;
        std::printf("ensemble/%-13s %10.4f %10.4f %8.2f %s\n", name, ts, tp, ts / tp, eq ? "yes" : "no");
    }
    {
        const LieSystem g = gbm(0.1, 0.2);
        const StateVector x0 = StateVector::make(Vec::Ones(1), g.domain());
        ConvergenceOptions o;
        o.seeds = 512;
        o.levels = 6;
        o.oracle = [](const DriverPath& p, std::size_t k) {
            return Vec::Constant(1, std::exp(0.1 * p.time(k) + 0.2 * p.value(k)[1]));
        };
        ConvergenceTable a;
        ConvergenceTable b;
        o.execution = Execution::Serial;
        const double ts = seconds([&] { a = convergence_study(g, x0, o); });
        o.execution = Execution::Parallel;
        const double tp = seconds([&] { b = convergence_study(g, x0, o); });
        bool eq = a.rows.size() == b.rows.size();
        for (std::size_t k = 0; eq && k < a.rows.size(); ++k) {
            eq = a.rows[k].error == b.rows[k].error;
        }
        ok = ok && eq;
        std::printf("%-22s %10.4f %10.4f %8.2f %s\n", "convergence/gbm", ts, tp, ts / tp, eq ? "yes" : "no");
    }
    {
        const CatalogEntry e = make_entry("lv-additive");
        const auto points = sample_points(e.sys, 20000, 3);
        StructureReport a;
        StructureReport b;
        const double ts = seconds([&] { a = check_structure_constants(e.sys, points, 1e-9, Execution::Serial); });
        const double tp = seconds([&] { b = check_structure_constants(e.sys, points, 1e-9, Execution::Parallel); });
        const bool eq = a.max_residual == b.max_residual;
        ok = ok && eq;
        std::printf("%-22s %10.4f %10.4f %8.2f %s\n", "structure/lv-additive", ts, tp, ts / tp, eq ? "yes" : "no");
    }
    return ok ? 0 : 1;
}
