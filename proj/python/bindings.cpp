#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "legendre_cs/char_sums.hpp"
#include "legendre_cs/flat_rip.hpp"
#include "legendre_cs/recovery.hpp"
#include "legendre_cs/theorem_sums.hpp"

namespace py = pybind11;
using namespace lcs;

namespace {

py::array_t<Complex> to_array(const std::vector<Complex>& v) {
  py::array_t<Complex> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<Complex> from_array(const py::array_t<Complex, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

py::dict result_dict(const RecoveryResult& r) {
  py::dict d;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> support;
  for (const auto& idx : r.support) support.emplace_back(idx.l, idx.j);
  d["support"] = support;
  d["values"] = to_array(r.values);
  d["residual_norm"] = r.residual_norm;
  d["iterations"] = r.iterations;
  d["history"] = r.history;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Legendre-symbol Gabor frames for deterministic compressive sensing";

  py::enum_<NormConvention>(m, "NormConvention")
      .value("PAPER", NormConvention::PaperSqrtP)
      .value("UNIT", NormConvention::UnitNorm);

  m.def("is_prime", &is_prime);
  m.def("legendre_symbol", &legendre_symbol, py::arg("k"), py::arg("p"));

  py::class_<FieldContext>(m, "FieldContext")
      .def(py::init<std::uint64_t>(), py::arg("p"))
      .def_property_readonly("p", &FieldContext::p)
      .def("chi", [](const FieldContext& c) {
        auto chi = c.chi();
        return std::vector<int>(chi.begin(), chi.end());
      });

  m.def("gauss_sum", [](const FieldContext& ctx) { return gauss_sum(ctx).value; });

  m.def("gabor_vector", [](const FieldContext& ctx, std::uint32_t l, std::uint32_t j, NormConvention conv) {
    return to_array(gabor_vector(ctx, {l, j}, conv));
  }, py::arg("ctx"), py::arg("l"), py::arg("j"), py::arg("convention") = NormConvention::PaperSqrtP);

  m.def("coherence", [](const FieldContext& ctx, NormConvention conv, bool brute, unsigned workers) {
    return coherence(ctx, conv, brute ? CoherenceMode::Brute : CoherenceMode::ShiftClass, workers);
  }, py::arg("ctx"), py::arg("convention") = NormConvention::PaperSqrtP, py::arg("brute") = false,
     py::arg("workers") = 1);

  m.def("twisted_autocorrelation", [](const FieldContext& ctx, std::uint64_t mm, std::uint64_t n) {
    const BoundCheck b = twisted_autocorrelation(ctx, mm, n);
    return py::make_tuple(b.value, b.bound);
  }, py::arg("ctx"), py::arg("m"), py::arg("n"));

  py::class_<ThetaParams>(m, "ThetaParams")
      .def(py::init<>())
      .def_static("realize", &ThetaParams::realize, py::arg("p"), py::arg("sigma"), py::arg("delta"),
                  py::arg("epsilon") = 0.1)
      .def_readwrite("p", &ThetaParams::p)
      .def_readwrite("n", &ThetaParams::n)
      .def_readwrite("delta", &ThetaParams::delta)
      .def_readwrite("sigma", &ThetaParams::sigma)
      .def_readwrite("epsilon", &ThetaParams::epsilon)
      .def_readwrite("alpha", &ThetaParams::alpha)
      .def_readwrite("m1len", &ThetaParams::m1len)
      .def_readwrite("m2len", &ThetaParams::m2len)
      .def("violations", &ThetaParams::violations, py::arg("theorem_mode") = true);

  m.def("dirichlet_kernel_mag", [](std::uint64_t p, std::uint64_t length, std::int64_t t) {
    return dirichlet_kernel_mag(p, {0, length}, t);
  }, py::arg("p"), py::arg("length"), py::arg("tshift"));
  m.def("sine_sum_exact", &sine_sum_exact);
  m.def("trivial_bound", &trivial_bound);
  m.def("singular_region_sums", [](const ThetaParams& tp) {
    const SingularSums s = singular_region_sums(tp);
    return py::make_tuple(s.near_zero, s.near_neg_n);
  });
  m.def("scaling_fit", [](std::vector<std::pair<double, double>> pts) {
    const ScalingFit f = scaling_fit(std::move(pts));
    return py::make_tuple(f.exponent, f.log_k, f.r2);
  });
  m.def("log_spaced_primes", &log_spaced_primes);

  m.def("flat_rip_delta", [](const FieldContext& ctx, std::size_t k, std::size_t trials, NormConvention conv,
                             std::uint64_t seed) {
    const ConsecutiveFiberSampler sampler(ctx.p(), k);
    const RipReport r = flat_rip_delta(ctx, k, sampler, trials, conv, seed);
    py::dict d;
    d["delta"] = r.delta;
    d["relaxed_delta"] = r.relaxed_delta;
    d["mu"] = r.mu;
    d["trials"] = r.trials;
    return d;
  }, py::arg("ctx"), py::arg("k"), py::arg("trials") = 100, py::arg("convention") = NormConvention::PaperSqrtP,
     py::arg("seed") = kDefaultSeed);
  m.def("rip_order_from_flat", [](std::size_t k, double delta, std::size_t s) {
    const RipOrder r = rip_order_from_flat(k, delta, s);
    return py::make_tuple(r.order, r.rip_delta);
  });

  m.def("measure", [](const FieldContext& ctx, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& support,
                      const std::vector<Complex>& values, NormConvention conv) {
    SparseSignal x;
    x.p = ctx.p();
    for (const auto& [l, j] : support) x.support.push_back({l, j});
    x.values = values;
    return to_array(measure(ctx, x, conv));
  }, py::arg("ctx"), py::arg("support"), py::arg("values"), py::arg("convention") = NormConvention::UnitNorm);

  m.def("omp", [](const FieldContext& ctx, const py::array_t<Complex, py::array::c_style | py::array::forcecast>& b,
                  std::size_t k) {
    const auto v = from_array(b);
    return result_dict(omp(ctx, v, k, NormConvention::UnitNorm));
  }, py::arg("ctx"), py::arg("b"), py::arg("k"));

  m.def("ista_l1", [](const FieldContext& ctx, const py::array_t<Complex, py::array::c_style | py::array::forcecast>& b,
                      double lambda, std::size_t iterations) {
    const auto v = from_array(b);
    return result_dict(ista_l1(ctx, v, lambda, iterations, NormConvention::UnitNorm));
  }, py::arg("ctx"), py::arg("b"), py::arg("lam"), py::arg("iterations") = 300);

  m.def("recovery_experiment", [](const FieldContext& ctx, std::vector<std::size_t> ks, std::size_t trials,
                                  std::uint64_t seed, const std::string& method, unsigned workers) {
    ExperimentOptions opts;
    opts.workers = workers;
    std::vector<double> rates;
    for (const auto& row : recovery_experiment(ctx, ks, trials, seed, parse_method(method), opts)) rates.push_back(row.rate);
    return rates;
  }, py::arg("ctx"), py::arg("k_values"), py::arg("trials"), py::arg("seed") = kDefaultSeed,
     py::arg("method") = "omp", py::arg("workers") = 1);
}
