#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "critshuffle/bounds.hpp"
#include "critshuffle/channel_spec.hpp"
#include "critshuffle/coupling.hpp"
#include "critshuffle/limit_experiment.hpp"
#include "critshuffle/multivariate.hpp"
#include "critshuffle/privacy_curve.hpp"
#include "critshuffle/rate_sweep.hpp"
#include "critshuffle/regime.hpp"
#include "critshuffle/rr_experiment.hpp"

#define STR_(x) #x
#define STR(x) STR_(x)

namespace py = pybind11;
using namespace critshuffle;

namespace {

Calibration calibration(std::optional<double> eps0, std::optional<double> c) {
  if (eps0.has_value() == c.has_value()) throw std::invalid_argument("pass exactly one of eps0 and c");
  if (c) return CanonicalC{*c};
  return ExplicitEps0{*eps0};
}

template <class Dist>
void bind_experiment(py::module_& m, const char* name) {
  py::class_<Experiment<Dist>>(m, name)
      .def_readonly("p", &Experiment<Dist>::p)
      .def_readonly("q", &Experiment<Dist>::q)
      .def("delta", [](const Experiment<Dist>& e, double eps, Direction d) { return delta_np(e.p, e.q, eps, d).value; },
           py::arg("eps"), py::arg("direction") = Direction::forward)
      .def("tv", [](const Experiment<Dist>& e) { return tv_distance(e.p, e.q); });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "critshuffle core bindings";
  m.attr("__version__") = STR(VERSION_INFO);

  py::enum_<Direction>(m, "Direction")
      .value("forward", Direction::forward)
      .value("reverse", Direction::reverse)
      .value("two_sided", Direction::two_sided);

  py::class_<TVInterval>(m, "TVInterval")
      .def_readonly("lower", &TVInterval::lower)
      .def_readonly("upper", &TVInterval::upper)
      .def("__repr__", [](const TVInterval& t) {
        return "TVInterval(" + std::to_string(t.lower) + ", " + std::to_string(t.upper) + ")";
      });

  py::class_<IntDist>(m, "IntDist")
      .def(py::init<std::int64_t, std::vector<double>, double>(), py::arg("offset"), py::arg("mass"),
           py::arg("tail_mass") = 0.0)
      .def_property_readonly("offset", &IntDist::offset)
      .def_property_readonly("max_support", &IntDist::max_support)
      .def_property_readonly("tail_mass", &IntDist::tail_mass)
      .def_property_readonly("mass", [](const IntDist& d) { return std::vector<double>(d.mass().begin(), d.mass().end()); })
      .def("pmf", &IntDist::pmf)
      .def("total", &IntDist::total)
      .def("mean", &IntDist::mean)
      .def("variance", &IntDist::variance)
      .def("__len__", &IntDist::size);

  py::class_<LatticeDist>(m, "LatticeDist")
      .def_property_readonly("dim", &LatticeDist::dim)
      .def_property_readonly("tail_mass", &LatticeDist::tail_mass)
      .def("total", &LatticeDist::total)
      .def("atoms", [](const LatticeDist& d) {
        std::vector<std::pair<std::vector<double>, double>> out;
        for (const auto& [pt, w] : d.points()) out.emplace_back(to_doubles(pt), w);
        return out;
      })
      .def("__len__", &LatticeDist::size);

  bind_experiment<IntDist>(m, "IntExperiment");
  bind_experiment<LatticeDist>(m, "LatticeExperiment");

  m.def("binomial", &make_binomial, py::arg("m"), py::arg("p"));
  m.def("poisson", &make_poisson, py::arg("lam"), py::arg("tail_eps") = kDefaultTailEps);
  m.def("skellam", [](double l0, double l1, double tail) { return make_skellam(l0, l1, tail); }, py::arg("lambda0"),
        py::arg("lambda1"), py::arg("tail_eps") = kDefaultTailEps);
  m.def("convolve", py::overload_cast<const IntDist&, const IntDist&>(&convolve));
  m.def("tv_distance", py::overload_cast<const IntDist&, const IntDist&>(&tv_distance));

  m.def("delta_np", [](const IntDist& p, const IntDist& q, double eps, Direction d) {
    const auto r = delta_np(p, q, eps, d);
    return py::make_tuple(r.value, r.slack);
  }, py::arg("p"), py::arg("q"), py::arg("eps"), py::arg("direction") = Direction::forward);
  m.def("gdp_delta", &gdp_delta, py::arg("mu"), py::arg("eps"));

  py::class_<TradeoffCurve>(m, "TradeoffCurve")
      .def("__call__", &TradeoffCurve::operator())
      .def("knots", [](const TradeoffCurve& c) {
        std::vector<std::pair<double, double>> out;
        for (const auto& k : c.knots()) out.emplace_back(k.alpha, k.beta);
        return out;
      })
      .def("delta", [](const TradeoffCurve& c, double eps) { return delta_from_tradeoff(c, eps); });
  m.def("tradeoff", py::overload_cast<const IntDist&, const IntDist&>(&tradeoff_generic));
  m.def("poisson_shift_tradeoff", &poisson_shift_tradeoff, py::arg("lam"), py::arg("m_max") = 0);

  py::class_<RRConfig>(m, "RRConfig")
      .def_readonly("n", &RRConfig::n)
      .def_readonly("eps0", &RRConfig::eps0)
      .def_readonly("exp_eps0", &RRConfig::exp_eps0)
      .def_readonly("delta_n", &RRConfig::delta_n)
      .def_readonly("k", &RRConfig::k)
      .def_readonly("pi_n", &RRConfig::pi_n);
  m.def("rr_config", [](std::int64_t n, std::optional<double> eps0, std::optional<double> c, std::int64_t k) {
    return rr_config(n, calibration(eps0, c), k);
  }, py::arg("n"), py::arg("eps0") = py::none(), py::arg("c") = py::none(), py::arg("k") = 0);
  m.def("canonical_pair", &canonical_pair);
  m.def("composition_pair", &composition_pair);

  m.def("poisson_shift_pair", &poisson_shift_pair, py::arg("lam"), py::arg("tail_eps") = kDefaultTailEps);
  m.def("skellam_shift_pair", [](double c, double pi) { return skellam_shift_pair(make_limit_params(c, pi)); },
        py::arg("c"), py::arg("pi"));
  m.def("poisson_shift_delta", &poisson_shift_delta_closed, py::arg("lam"), py::arg("eps"));

  py::class_<SharpPoissonRate>(m, "SharpPoissonRate")
      .def_readonly("lower", &SharpPoissonRate::lower)
      .def_readonly("predicted_atom_gap", &SharpPoissonRate::predicted_atom_gap)
      .def_readonly("exact_atom_gap", &SharpPoissonRate::exact_atom_gap)
      .def_readonly("upper", &SharpPoissonRate::upper);
  m.def("poisson_sharp_lower", &poisson_sharp_lower, py::arg("c"), py::arg("n"));

  py::class_<ChannelSpec>(m, "ChannelSpec")
      .def_readonly("alphabet", &ChannelSpec::alphabet)
      .def_readonly("alpha0", &ChannelSpec::alpha0)
      .def_readonly("alpha1", &ChannelSpec::alpha1)
      .def_readonly("pi", &ChannelSpec::pi)
      .def("__str__", &format_channel_spec);
  m.def("parse_channel_spec", &parse_channel_spec_string, py::arg("text"));
  m.def("compound_poisson_limit",
        [](const ChannelSpec& s) { return compound_poisson_limit(to_intensity_spec(s)); });
  m.def("exact_histogram_pair", [](const ChannelSpec& s, std::int64_t n, std::int64_t k, int cap) {
    return exact_histogram_pair(channel_from_intensities(s, n), k, cap);
  }, py::arg("spec"), py::arg("n"), py::arg("k"), py::arg("rare_cap") = kDefaultRareCap);

  py::class_<HybridGapRow>(m, "HybridGapRow")
      .def_readonly("n", &HybridGapRow::n)
      .def_readonly("k", &HybridGapRow::k)
      .def_readonly("delta_full", &HybridGapRow::delta_full)
      .def_readonly("delta_projected", &HybridGapRow::delta_projected)
      .def_readonly("gap", &HybridGapRow::gap)
      .def_readonly("bound", &HybridGapRow::bound);
  m.def("hybrid_delta_gap", &hybrid_delta_gap, py::arg("spec"), py::arg("eps"), py::arg("n_grid"),
        py::arg("rare_cap") = kDefaultRareCap);

  py::class_<RateRow>(m, "RateRow")
      .def_readonly("n", &RateRow::n)
      .def_readonly("tv_exact", &RateRow::tv_exact)
      .def_readonly("tv_alt", &RateRow::tv_alt)
      .def_readonly("upper_bound", &RateRow::upper_bound)
      .def_readonly("lower_bound", &RateRow::lower_bound)
      .def_readonly("delta_gaps", &RateRow::delta_gaps)
      .def_readonly("stability_bounds", &RateRow::stability_bounds)
      .def_readonly("valid", &RateRow::valid);
  py::class_<RateSweep>(m, "RateSweep")
      .def_readonly("eps_grid", &RateSweep::eps_grid)
      .def_readonly("rows", &RateSweep::rows)
      .def_readonly("slope", &RateSweep::slope)
      .def_readonly("slack_exceeded", &RateSweep::slack_exceeded)
      .def_property_readonly("flagged", &RateSweep::flagged);
  m.def("poisson_sweep", [](double c, const std::vector<std::int64_t>& grid, const std::vector<double>& eps, unsigned jobs) {
    py::gil_scoped_release release;
    return rate_sweep(poisson_sweep_spec(c), grid, eps, jobs);
  }, py::arg("c"), py::arg("n_grid"), py::arg("eps_grid") = std::vector<double>{1.0}, py::arg("jobs") = 1);
  m.def("skellam_sweep", [](double c, double pi, const std::vector<std::int64_t>& grid, const std::vector<double>& eps,
                            unsigned jobs) {
    py::gil_scoped_release release;
    return rate_sweep(skellam_sweep_spec(c, pi), grid, eps, jobs);
  }, py::arg("c"), py::arg("pi"), py::arg("n_grid"), py::arg("eps_grid") = std::vector<double>{1.0}, py::arg("jobs") = 1);
  m.def("geometric_grid", &geometric_grid, py::arg("from_exp"), py::arg("to_exp"), py::arg("step"));

  py::class_<RegimeVerdict>(m, "RegimeVerdict")
      .def_property_readonly("regime", [](const RegimeVerdict& v) { return to_string(v.regime); })
      .def_readonly("c", &RegimeVerdict::c)
      .def_readonly("a_n_trace", &RegimeVerdict::a_n_trace);
  m.def("classify_regime", [](const std::string& scaling, const std::vector<std::int64_t>& grid) {
    return classify_regime(parse_scaling(scaling), grid);
  }, py::arg("scaling"), py::arg("n_grid") = std::vector<std::int64_t>{10, 100, 1000, 10000});

  py::class_<CouplingReport>(m, "CouplingReport")
      .def_readonly("n_samples", &CouplingReport::n_samples)
      .def_readonly("mismatch_freq", &CouplingReport::mismatch_freq)
      .def_readonly("bound", &CouplingReport::bound)
      .def_readonly("three_sigma", &CouplingReport::three_sigma)
      .def_readonly("ks_first", &CouplingReport::ks_first)
      .def_readonly("ks_second", &CouplingReport::ks_second);
  m.def("couple_binom_poisson", &couple_binom_poisson, py::arg("m"), py::arg("p"), py::arg("seed"),
        py::arg("n_samples"), py::call_guard<py::gil_scoped_release>());
  m.def("couple_poisson_poisson", &couple_poisson_poisson, py::arg("lam"), py::arg("lam_prime"), py::arg("seed"),
        py::arg("n_samples"), py::call_guard<py::gil_scoped_release>());
  m.def("couple_multinomial_poisson", &couple_multinomial_poisson, py::arg("m"), py::arg("probs"),
        py::arg("rare_set"), py::arg("seed"), py::arg("n_samples"), py::call_guard<py::gil_scoped_release>());
}
