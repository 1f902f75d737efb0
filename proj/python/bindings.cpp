#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qozcp/ambiguity.hpp"
#include "qozcp/sequences.hpp"
#include "qozcp/solver.hpp"
#include "qozcp/spectral.hpp"
#include "qozcp/waveform.hpp"

namespace py = pybind11;
using namespace qozcp;

namespace {

ComplexVector lags(const CorrelationVector& c) { return ComplexVector(c.values().begin(), c.values().end()); }

ComplexVector entries(const ComplexSequence& s) { return ComplexVector(s.begin(), s.end()); }

SequencePair make_pair(ComplexVector x, ComplexVector y) {
    return SequencePair(ComplexSequence(std::move(x)), ComplexSequence(std::move(y)));
}

struct PySolveResult {
    ComplexVector x;
    ComplexVector y;
    std::vector<double> objective_history;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
};

}  // namespace

PYBIND11_MODULE(_qozcp, m) {
    m.doc() = "Quasi-orthogonal Z-complementary pair design and ambiguity evaluation";

    m.def("cross_correlation",
          [](ComplexVector x, ComplexVector y) {
              return lags(cross_correlation(ComplexSequence(std::move(x)), ComplexSequence(std::move(y))));
          },
          py::arg("x"), py::arg("y"), "C_xy(k) for k = -(L-1) .. L-1.");
    m.def("auto_correlation", [](ComplexVector x) { return lags(auto_correlation(ComplexSequence(std::move(x)))); },
          py::arg("x"));
    m.def("complementary_sum",
          [](ComplexVector x, ComplexVector y) { return lags(complementary_sum(make_pair(std::move(x), std::move(y)))); },
          py::arg("x"), py::arg("y"));
    m.def("correlations_via_fft",
          [](ComplexVector x, ComplexVector y) {
              auto [r, c] = correlations_via_fft(make_pair(std::move(x), std::move(y)));
              return py::make_tuple(lags(r), lags(c));
          },
          py::arg("x"), py::arg("y"), "(C_x + C_y, C_xy) through 2L-point transforms.");
    m.def("reverse_conjugate", [](ComplexVector x) { return entries(reverse_conjugate(ComplexSequence(std::move(x)))); },
          py::arg("x"));
    m.def("papr", [](ComplexVector x) { return papr(ComplexSequence(std::move(x))); }, py::arg("x"));
    m.def("objective",
          [](ComplexVector x, ComplexVector y, std::size_t zone, double alpha) {
              const auto pair = make_pair(std::move(x), std::move(y));
              return objective(pair, WeightProfile::indicator(pair.length(), zone, alpha));
          },
          py::arg("x"), py::arg("y"), py::arg("zone"), py::arg("alpha") = 0.5,
          "Design objective with indicator weights on the zone.");
    m.def("lambda_j",
          [](std::size_t length, std::size_t zone, double alpha) {
              return lambda_j(WeightProfile::indicator(length, zone, alpha));
          },
          py::arg("length"), py::arg("zone"), py::arg("alpha") = 0.5);

    m.def("proj_unimodular", [](const ComplexVector& v) { return proj_unimodular(v); }, py::arg("v"));
    m.def("proj_papr", [](const ComplexVector& v, double energy, double peak) { return proj_papr(v, energy, peak); },
          py::arg("v"), py::arg("energy"), py::arg("peak"));

    m.def("golay_pair",
          [](std::size_t length) {
              const auto p = golay_pair(length);
              return py::make_tuple(entries(p.x()), entries(p.y()));
          },
          py::arg("length"));
    m.def("ptm", [](std::size_t n) { return ptm(n).bits; }, py::arg("n"));
    m.def("prouhet_partition_sums",
          [](std::size_t n, int order) {
              const auto s = prouhet_partition_sums(ptm(n), order);
              return py::make_tuple(s.zeros, s.ones);
          },
          py::arg("n"), py::arg("order"));

    py::class_<PySolveResult>(m, "SolveResult")
        .def_readonly("x", &PySolveResult::x)
        .def_readonly("y", &PySolveResult::y)
        .def_readonly("objective_history", &PySolveResult::objective_history)
        .def_readonly("iterations", &PySolveResult::iterations)
        .def_readonly("seed", &PySolveResult::seed);

    m.def("solve",
          [](std::size_t length, std::size_t zone, const std::string& mode, std::optional<double> papr_cap,
             double alpha, std::uint64_t seed, std::size_t restarts, std::size_t max_iter, double tol) {
              SolverConfig c;
              c.length = length;
              c.zone = zone;
              c.mode = parse_constraint_mode(mode);
              if (papr_cap) {
                  if (c.mode == ConstraintMode::Unimodular) throw std::invalid_argument("papr only applies to mode 'papr'");
                  c.papr_cap = *papr_cap;
              }
              c.alpha = alpha;
              c.seed = seed;
              c.max_iterations = max_iter;
              c.tolerance = tol;
              SolveResult r = [&] {
                  py::gil_scoped_release release;
                  return solve_best_of(c, restarts);
              }();
              return PySolveResult{entries(r.pair.x()), entries(r.pair.y()), r.state.objective_history,
                                   r.state.iteration, std::stoull(r.pair.meta().at("seed"))};
          },
          py::arg("length"), py::arg("zone"), py::arg("mode") = "papr", py::arg("papr") = py::none(),
          py::arg("alpha") = 0.5, py::arg("seed") = 0, py::arg("restarts") = 1, py::arg("max_iter") = 200000,
          py::arg("tol") = 1e-14, "Best-of-restarts accelerated MM design.");

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("max_complementary_sidelobe_in_zone", &MetricsReport::max_complementary_sidelobe_in_zone)
        .def_readonly("max_cross_correlation_in_zone", &MetricsReport::max_cross_correlation_in_zone)
        .def_readonly("max_aaf_sidelobe_omega1", &MetricsReport::max_aaf_sidelobe_omega1)
        .def_readonly("max_caf_omega2", &MetricsReport::max_caf_omega2)
        .def_readonly("peak_value", &MetricsReport::peak_value);

    m.def("zone_metrics",
          [](ComplexVector x, ComplexVector y, std::size_t zone, std::size_t pri) {
              MetricsOptions o;
              o.pri_count = pri;
              return zone_metrics(make_pair(std::move(x), std::move(y)), zone, o);
          },
          py::arg("x"), py::arg("y"), py::arg("zone"), py::arg("pri") = 8,
          "Zone correlation maxima and AAF/CAF maxima under an N-PRI PTM-A schedule.");
}
