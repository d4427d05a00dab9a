#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "gsconvex/cert.hpp"
#include "gsconvex/cli.hpp"
#include "gsconvex/diff.hpp"
#include "gsconvex/opt.hpp"
#include "gsconvex/oracle.hpp"

namespace py = pybind11;
using namespace gsconvex;

namespace {

BoxDomain box_from(const std::vector<std::pair<double, double>>& box) {
  std::vector<Interval> axes;
  for (const auto& [lo, hi] : box) axes.push_back({lo, hi});
  return BoxDomain(std::move(axes));
}

GradientMethod method_from(const std::string& name) {
  if (name == "dual") return GradientMethod::Dual;
  if (name == "central") return GradientMethod::CentralDifference;
  throw std::invalid_argument("gradient method must be 'dual' or 'central'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sampling checks for GS-exponential kind convexity";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<SampleError>(m, "SampleError", PyExc_ArithmeticError);
  py::register_exception<OptimizationError>(m, "OptimizationError", PyExc_RuntimeError);

  py::class_<FunctionSpec>(m, "Function")
      .def(py::init([](const std::string& expression, const std::vector<std::pair<double, double>>& box,
                       const std::string& name) { return FunctionSpec::parse(expression, box_from(box), name); }),
           py::arg("expression"), py::arg("box"), py::arg("name") = "Q")
      .def("__call__", &FunctionSpec::operator(), py::arg("x"))
      .def_property_readonly("dimension", &FunctionSpec::dimension)
      .def_readonly("name", &FunctionSpec::name)
      .def("__str__", [](const FunctionSpec& f) { return f.body.to_string(); });

  py::class_<ModMap>(m, "ModMap")
      .def(py::init([](const std::string& expression, int dimension) { return ModMap::parse(expression, dimension); }),
           py::arg("expression"), py::arg("dimension"))
      .def_static("constant", [](double c, int dimension) { return ModMap::constant(c, dimension); }, py::arg("c"),
                  py::arg("dimension"))
      .def("__call__", &ModMap::operator(), py::arg("u"), py::arg("v"), py::arg("s"))
      .def("__str__", [](const ModMap& g) { return g.body.to_string(); });

  py::class_<SampleGrid>(m, "SampleGrid")
      .def(py::init([](int points_per_axis, std::optional<std::vector<double>> a_grid, std::vector<double> s_list,
                       bool diagonal, int refine, std::uint64_t seed) {
             SampleGrid g;
             g.points_per_axis = points_per_axis;
             g.a_grid = a_grid ? *a_grid : SampleGrid::linspace(0.0, 1.0, points_per_axis);
             g.s_list = std::move(s_list);
             g.pairs = diagonal ? PairMode::Diagonal : PairMode::All;
             g.refine = refine;
             g.seed = seed;
             return g;
           }),
           py::arg("points_per_axis") = 11, py::arg("a_grid") = py::none(),
           py::arg("s_list") = std::vector<double>{1.0}, py::arg("diagonal") = false, py::arg("refine") = 0,
           py::arg("seed") = 0)
      .def_readwrite("points_per_axis", &SampleGrid::points_per_axis)
      .def_readwrite("a_grid", &SampleGrid::a_grid)
      .def_readwrite("s_list", &SampleGrid::s_list)
      .def_readwrite("refine", &SampleGrid::refine)
      .def_readwrite("seed", &SampleGrid::seed);

  py::class_<ResidualSample>(m, "ResidualSample")
      .def_readonly("m1", &ResidualSample::m1)
      .def_readonly("m2", &ResidualSample::m2)
      .def_readonly("a", &ResidualSample::a)
      .def_readonly("s", &ResidualSample::s)
      .def_readonly("residual", &ResidualSample::residual);

  py::class_<ConvexityReport>(m, "ConvexityReport")
      .def_property_readonly("class_id", [](const ConvexityReport& r) { return to_string(r.class_id); })
      .def_property_readonly("verdict", [](const ConvexityReport& r) { return to_string(r.verdict); })
      .def_readonly("worst", &ConvexityReport::worst)
      .def_readonly("worst_per_s", &ConvexityReport::worst_per_s)
      .def_readonly("samples", &ConvexityReport::samples)
      .def_readonly("tolerance", &ConvexityReport::tolerance);

  py::class_<MinimalG>(m, "MinimalG")
      .def_readonly("gstar", &MinimalG::gstar)
      .def_readonly("argmax_a", &MinimalG::argmax_a)
      .def_readonly("endpoint_feasible", &MinimalG::endpoint_feasible)
      .def_readonly("endpoint_residual", &MinimalG::endpoint_residual);

  py::class_<T6Margins>(m, "T6Margins")
      .def_readonly("lhs", &T6Margins::lhs)
      .def_readonly("rhs_i", &T6Margins::rhs_i)
      .def_readonly("rhs_ii", &T6Margins::rhs_ii)
      .def_readonly("margin_i", &T6Margins::margin_i)
      .def_readonly("margin_ii", &T6Margins::margin_ii);

  py::class_<T7Margin>(m, "T7Margin")
      .def_readonly("lhs", &T7Margin::lhs)
      .def_readonly("rhs", &T7Margin::rhs)
      .def_readonly("margin", &T7Margin::margin);

  py::class_<C2Margin>(m, "C2Margin")
      .def_property_readonly("branch",
                             [](const C2Margin& c) { return c.branch == SignBranch::Positive ? "positive" : "negative"; })
      .def_readonly("lhs", &C2Margin::lhs)
      .def_readonly("rhs", &C2Margin::rhs)
      .def_readonly("margin", &C2Margin::margin)
      .def_readonly("holds", &C2Margin::holds);

  py::class_<StartTrace>(m, "StartTrace")
      .def_readonly("start", &StartTrace::start)
      .def_readonly("end", &StartTrace::end)
      .def_readonly("value", &StartTrace::value)
      .def_readonly("iterations", &StartTrace::iterations)
      .def_property_readonly("status", [](const StartTrace& t) { return to_string(t.status); });

  py::class_<OptimizationResult>(m, "OptimizationResult")
      .def_readonly("best_point", &OptimizationResult::best_point)
      .def_readonly("best_value", &OptimizationResult::best_value)
      .def_readonly("starts", &OptimizationResult::starts);

  py::class_<Certificate>(m, "Certificate")
      .def_readonly("candidate", &Certificate::candidate)
      .def_readonly("a", &Certificate::a)
      .def_readonly("s", &Certificate::s)
      .def_readonly("holds", &Certificate::holds)
      .def_readonly("worst_margin", &Certificate::worst_margin)
      .def_readonly("witness", &Certificate::witness)
      .def_readonly("samples", &Certificate::samples);

  py::class_<oracle::WorstResidual>(m, "WorstResidual")
      .def_readonly("worst", &oracle::WorstResidual::worst)
      .def_readonly("witness", &oracle::WorstResidual::witness)
      .def_readonly("samples", &oracle::WorstResidual::samples);

  m.def("weights", [](double a, double s) {
    const WeightPair w = weights(MixParam(a), SParam(s));
    return std::make_pair(w.w1, w.w2);
  }, py::arg("a"), py::arg("s"));

  m.def("lemma_margins", [](double a, double s) {
    const LemmaMargins d = lemma_margins(MixParam(a), SParam(s));
    return std::make_pair(d.d1, d.d2);
  }, py::arg("a"), py::arg("s"));

  m.def("residual", [](const FunctionSpec& q, const ModMap& g, double s, const Point& m1, const Point& m2, double a) {
    return residual(q, g, SParam(s), m1, m2, MixParam(a));
  }, py::arg("q"), py::arg("g"), py::arg("s"), py::arg("m1"), py::arg("m2"), py::arg("a"));

  m.def("check_gs_convex", [](const FunctionSpec& q, const ModMap& g, const SampleGrid& grid, double tolerance,
                              int threads) {
    py::gil_scoped_release release;
    return check_gs_convex(q, g, grid, tolerance, {threads});
  }, py::arg("q"), py::arg("g"), py::arg("grid"), py::arg("tolerance") = kDefaultTolerance, py::arg("threads") = 1);

  m.def("check_class", [](const std::string& cls, const FunctionSpec& q, std::optional<ModMap> g, double s,
                          const SampleGrid& grid, double tolerance, int threads) {
    py::gil_scoped_release release;
    return check_class(parse_convexity_class(cls), q, g ? &*g : nullptr, SParam(s), grid, tolerance, {threads});
  }, py::arg("cls"), py::arg("q"), py::arg("g") = py::none(), py::arg("s") = 1.0, py::arg("grid") = SampleGrid{},
     py::arg("tolerance") = kDefaultTolerance, py::arg("threads") = 1);

  m.def("minimal_g", [](const FunctionSpec& q, double s, const Point& m1, const Point& m2,
                        const std::vector<double>& a_grid) { return minimal_g(q, SParam(s), m1, m2, a_grid); },
        py::arg("q"), py::arg("s"), py::arg("m1"), py::arg("m2"), py::arg("a_grid"));

  m.def("gradient", [](const FunctionSpec& q, const Point& at, const std::string& method, double h) {
    return gradient(q, at, method_from(method), h).value;
  }, py::arg("q"), py::arg("m"), py::arg("method") = "dual", py::arg("h") = kDefaultFdStep);

  m.def("check_t6", [](const FunctionSpec& q, const ModMap& g, double s, const Point& m1, const Point& m2, double a,
                       const std::string& variant) {
    return check_t6(q, g, SParam(s), m1, m2, MixParam(a), parse_t6ii_variant(variant));
  }, py::arg("q"), py::arg("g"), py::arg("s"), py::arg("m1"), py::arg("m2"), py::arg("a"),
     py::arg("variant") = "text");

  m.def("check_t7", [](const FunctionSpec& q, const ModMap& g, double s, const Point& m1, const Point& m2, double a) {
    return check_t7(q, g, SParam(s), m1, m2, MixParam(a));
  }, py::arg("q"), py::arg("g"), py::arg("s"), py::arg("m1"), py::arg("m2"), py::arg("a"));

  m.def("check_c2", [](const FunctionSpec& q, const ModMap& g, double s, const Point& m1, const Point& m2, double a) {
    return check_c2(q, g, SParam(s), m1, m2, MixParam(a));
  }, py::arg("q"), py::arg("g"), py::arg("s"), py::arg("m1"), py::arg("m2"), py::arg("a"));

  m.def("minimize", [](const FunctionSpec& q, int starts, int max_iters, double tolerance, std::uint64_t seed) {
    MinimizeOptions o;
    o.starts = starts;
    o.max_iters = max_iters;
    o.tolerance = tolerance;
    o.seed = seed;
    return minimize(q, o);
  }, py::arg("q"), py::arg("starts") = 8, py::arg("max_iters") = 1000, py::arg("tolerance") = 1e-10,
     py::arg("seed") = 0);

  m.def("certify_unconstrained", [](const FunctionSpec& q, const ModMap& g, double s, double a, const Point& at,
                                    std::vector<Point> n_grid) {
    return certify_unconstrained(q, g, SParam(s), a, at, std::move(n_grid));
  }, py::arg("q"), py::arg("g"), py::arg("s"), py::arg("a"), py::arg("m"), py::arg("n_grid"));

  m.def("grid_points", [](const std::vector<std::pair<double, double>>& box, int points_per_axis) {
    return grid_points(box_from(box), points_per_axis);
  }, py::arg("box"), py::arg("points_per_axis"));

  m.def("oracle_worst_residual", [](const FunctionSpec& q, const ModMap& g, const SampleGrid& grid) {
    return oracle::brute_force_worst_residual(q, g, grid.s_list, grid);
  }, py::arg("q"), py::arg("g"), py::arg("grid"));

  m.def("run_cli", [](const std::string& subcommand, const std::string& config_text, const std::string& out_dir,
                      int threads, std::optional<std::uint64_t> seed, bool timings) {
    cli::RunOptions o;
    o.threads = threads;
    o.seed = seed;
    o.timings = timings;
    std::ostringstream err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli::run_text(subcommand, config_text, out_dir, o, err);
    }
    return std::make_pair(code, err.str());
  }, py::arg("subcommand"), py::arg("config_text"), py::arg("out_dir"), py::arg("threads") = 1,
     py::arg("seed") = py::none(), py::arg("timings") = false);
}
