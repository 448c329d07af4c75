#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "xiprime/app.hpp"
#include "xiprime/arith.hpp"
#include "xiprime/error.hpp"
#include "xiprime/parallel.hpp"
#include "xiprime/special.hpp"
#include "xiprime/stats.hpp"
#include "xiprime/verify.hpp"
#include "xiprime/zeros.hpp"

namespace py = pybind11;
using namespace xiprime;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Xi / Xi' zeros, form factors, arithmetic sums and explicit-formula checks";

  static py::handle error_type = py::exception<Error>(m, "Error", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = e.code();
      exc.attr("exit_code") = exit_code(e.kind());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("set_worker_count", &set_worker_count);

  // special
  m.def("Z", &special::Z, py::arg("t"));
  m.def("Z_prime", &special::Z_prime, py::arg("t"));
  m.def("theta", &special::theta, py::arg("t"));
  m.def("zeta", &special::zeta, py::arg("s"));
  m.def("L", &special::L_func, py::arg("s"));
  m.def("Xi", [](double t, bool scaled) {
    const auto e = special::Xi(t, scaled);
    return py::make_tuple(e.value, e.est_abs_error);
  }, py::arg("t"), py::arg("scaled") = true);
  m.def("Xi_prime", [](double t, bool scaled) {
    const auto e = special::Xi_prime(t, scaled);
    return py::make_tuple(e.value, e.est_abs_error);
  }, py::arg("t"), py::arg("scaled") = true);

  // arith
  py::class_<arith::ArithTable>(m, "ArithTable")
      .def_property_readonly("n_max", &arith::ArithTable::n_max)
      .def_property_readonly("j_max", &arith::ArithTable::j_max)
      .def("lambda_j", &arith::ArithTable::lambda_j)
      .def("alpha", &arith::ArithTable::alpha);
  py::class_<arith::PrimeSieve>(m, "PrimeSieve")
      .def(py::init<std::uint64_t>())
      .def_property_readonly("limit", &arith::PrimeSieve::limit);
  m.def("build_tables", [](std::uint64_t n, int j) { return arith::build_tables(n, j); },
        py::arg("n_max"), py::arg("j_max"));
  m.def("S_sum", &arith::S_sum);
  m.def("A_total", &arith::A_total);
  m.def("theory_S_kk", &arith::theory_S_kk);
  m.def("theory_A_total", &arith::theory_A_total);
  m.def("prime_log_sum", [](const arith::PrimeSieve& s, int u, int v, double x) {
    const auto r = arith::prime_log_sum(s, u, v, x);
    return py::make_tuple(r.empirical, r.main_term);
  });

  // zeros
  py::enum_<zeros::Kind>(m, "Kind")
      .value("xi", zeros::Kind::xi)
      .value("xi_prime", zeros::Kind::xi_prime)
      .value("z_prime", zeros::Kind::z_prime)
      .value("imported", zeros::Kind::imported);
  py::class_<zeros::ZeroSet>(m, "ZeroSet")
      .def_readonly("kind", &zeros::ZeroSet::kind)
      .def_readonly("ordinates", &zeros::ZeroSet::ordinates)
      .def_readonly("t_max", &zeros::ZeroSet::t_max)
      .def_readonly("warnings", &zeros::ZeroSet::warnings)
      .def("__len__", [](const zeros::ZeroSet& z) { return z.ordinates.size(); });
  m.def("find_zeros", [](const std::string& kind, double lo, double hi) {
    py::gil_scoped_release release;
    return zeros::find_zeros(zeros::parse_kind(kind), lo, hi);
  }, py::arg("kind"), py::arg("t_lo"), py::arg("t_hi"));
  m.def("smooth_count", &zeros::smooth_count);
  m.def("export_zeros", &zeros::export_zeros);
  m.def("import_zeros", [](const std::filesystem::path& p) { return app::load_zero_file(p); });
  m.def("interlacing", [](const zeros::ZeroSet& xi, const zeros::ZeroSet& xip) {
    const auto r = zeros::interlacing_report(xi, xip);
    return py::make_tuple(r.pairs.size(), r.violations);
  });
  m.def("n1_minus_n", [](const zeros::ZeroSet& a, const zeros::ZeroSet& b) {
    return zeros::count_audit(a, &b).n1_minus_n;
  });

  // stats
  py::class_<stats::FormFactorCurve>(m, "FormFactorCurve")
      .def_readonly("T", &stats::FormFactorCurve::T)
      .def_readonly("alphas", &stats::FormFactorCurve::alphas)
      .def_readonly("empirical", &stats::FormFactorCurve::empirical)
      .def_readonly("theory_f1", &stats::FormFactorCurve::theory_f1)
      .def_readonly("theory_montgomery", &stats::FormFactorCurve::theory_montgomery)
      .def_readonly("neglected_weight_bound", &stats::FormFactorCurve::neglected_weight_bound);
  m.def("alpha_grid", &stats::alpha_grid);
  m.def("form_factor", [](const zeros::ZeroSet& z, double T, const std::vector<double>& a, double w, int K) {
    py::gil_scoped_release release;
    return stats::form_factor(z, T, a, w, K);
  }, py::arg("zeros"), py::arg("T"), py::arg("alphas"), py::arg("window") = 200.0, py::arg("K") = 8);
  m.def("theory_F1", &stats::theory_F1);
  m.def("theory_F_montgomery", &stats::theory_F_montgomery);
  m.def("ah_theory_F", &stats::ah_theory_F);
  m.def("normalized_gaps", [](const zeros::ZeroSet& z) {
    const auto g = stats::normalize_gaps(z);
    return py::make_tuple(g.normalized_gaps, g.fraction_below);
  });
  m.def("ah_normalized", [](std::size_t count, std::uint64_t seed) {
    stats::AHProcessSpec s;
    s.count = count;
    s.seed = seed;
    return stats::ah_normalized(s);
  }, py::arg("count") = 100000, py::arg("seed") = 1);

  // verify
  m.def("ef_lhs", [](double x, double t, double sigma, const zeros::ZeroSet& z, double w) {
    const auto v = verify::ef_lhs(x, t, sigma, z, w);
    return py::make_tuple(v.value, v.tail_bound);
  }, py::arg("x"), py::arg("t"), py::arg("sigma"), py::arg("zeros"), py::arg("window") = verify::kMinWindow);
  m.def("ef_rhs", [](double x, double t, double sigma, int K, const arith::ArithTable& tab) {
    return verify::ef_rhs(x, t, sigma, K, tab).value;
  });
  m.def("mean_value_integral", [](double x, int k, int l, double sigma, double T) {
    py::gil_scoped_release release;
    const auto r = verify::mean_value_integral(x, k, l, sigma, T);
    return py::make_tuple(r.numeric, r.predicted);
  });

  // pipelines
  m.def("run_pipeline", [](const std::string& name, const std::map<std::string, std::string>& settings,
                           const std::filesystem::path& out_dir) {
    app::RunConfig cfg;
    app::apply_environment(cfg);
    for (const auto& [k, v] : settings) app::apply_setting(cfg, k, v);
    py::gil_scoped_release release;
    return app::run_pipeline(name, cfg, out_dir);
  }, py::arg("name"), py::arg("settings"), py::arg("out_dir"));
}
