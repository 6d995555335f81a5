#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spincluster/cli.hpp"
#include "spincluster/dynamics.hpp"
#include "spincluster/errors.hpp"
#include "spincluster/observables.hpp"
#include "spincluster/spectra.hpp"
#include "spincluster/symmetry.hpp"
#include "spincluster/yangian.hpp"

namespace py = pybind11;
using namespace spincluster;

namespace {

py::list levels_to_list(const LevelSet& set) {
  py::list out;
  for (const Level& l : set.levels) {
    out.append(py::dict(py::arg("label") = l.label, py::arg("S") = l.S, py::arg("energy") = l.energy,
                        py::arg("multiplicity") = l.multiplicity));
  }
  return out;
}

CouplingSet couplings_from(int n, const std::vector<double>& values) { return CouplingSet(n, values); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spin-cluster numerics: Yangian charge, exact spectra, moments, magnetization dynamics";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def(
      "build_q",
      [](const std::vector<double>& u) {
        return build_q(SpinRegister(static_cast<int>(u.size())), {u});
      },
      py::arg("weights"), "Q = Y.Y as a dense complex matrix; one weight per site.");

  m.def(
      "heisenberg_hamiltonian",
      [](int n, const std::vector<double>& a) { return heisenberg_hamiltonian(SpinRegister(n), couplings_from(n, a)); },
      py::arg("n_sites"), py::arg("couplings"), "Couplings in pair order (1,2), (1,3), ..., (n-1,n).");

  m.def(
      "eigh",
      [](const OperatorMatrix& h) {
        const Spectrum s = hermitian_eig(h);
        return py::make_tuple(s.eigenvalues, s.eigenvectors);
      },
      py::arg("matrix"));

  m.def(
      "check_yangian_axioms",
      [](const std::vector<double>& u) {
        const AxiomReport r = check_yangian_axioms(SpinRegister(static_cast<int>(u.size())), {u});
        py::dict d;
        d["level_zero_residual"] = r.level_zero_residual;
        d["serre_residual"] = r.serre_residual;
        d["fitted_lambda"] = r.lambda_identifiable ? py::object(py::float_(r.fitted_lambda)) : py::none();
        d["serre_consistent"] = r.serre_consistent;
        return d;
      },
      py::arg("weights"));

  m.def(
      "commutant_family",
      [](const std::vector<double>& u) {
        const int n = static_cast<int>(u.size());
        const SpinRegister reg(n);
        const CouplingFamily f = commutant_family(reg, build_q(reg, {u}));
        std::vector<std::vector<double>> basis;
        for (const CouplingSet& b : f.basis) basis.push_back(b.values());
        return basis;
      },
      py::arg("weights"), "Orthonormal basis of couplings whose Hamiltonian commutes with Q.");

  m.def(
      "constrained_couplings_parallelogram",
      [](double a12, double a34, double a13) { return constrained_couplings_parallelogram(a12, a34, a13).values(); },
      py::arg("a12"), py::arg("a34"), py::arg("a13"));

  m.def(
      "mixing_theta",
      [](double a12, double a34, double a13) {
        return extract_mixing_theta(SpinRegister(4), constrained_couplings_parallelogram(a12, a34, a13)).theta;
      },
      py::arg("a12"), py::arg("a34"), py::arg("a13"));

  m.def("triangle_levels", [](double j12, double j13) { return levels_to_list(triangle_levels(j12, j13)); },
        py::arg("j12"), py::arg("j13"));
  m.def("parallelogram_levels", [](double a12, double a13) { return levels_to_list(parallelogram_levels(a12, a13)); },
        py::arg("a12"), py::arg("a13"));

  m.def(
      "classify_ground",
      [](double a12, double a13) {
        const PhasePoint p = classify_ground(a12, a13);
        return py::make_tuple(p.ground_labels, p.ground_S ? py::object(py::float_(*p.ground_S)) : py::none(),
                              p.ground_energy);
      },
      py::arg("a12"), py::arg("a13"), "(labels, S or None when mixed, energy) of the parallelogram ground level.");

  m.def(
      "ground_state_in_sector",
      [](int n, const std::vector<double>& a, double m) {
        const SpinRegister reg(n);
        const SectorGround g = ground_state_in_sector(reg, heisenberg_hamiltonian(reg, couplings_from(n, a)), m);
        return py::make_tuple(g.state, g.energy);
      },
      py::arg("n_sites"), py::arg("couplings"), py::arg("m"));

  m.def(
      "local_moments",
      [](const StateVector& state, double g) {
        int n = 0;
        while ((1 << n) < state.size()) ++n;
        return local_moments(SpinRegister(n), state, g).mu;
      },
      py::arg("state"), py::arg("g") = 2.0);

  m.def("transition_rate", &transition_rate, py::arg("A"), py::arg("inv_temp"), py::arg("delta"));

  m.def(
      "nine_level_formulas",
      [](double B, double delta_gap, double gamma) {
        const NineLevelFormulas f = nine_level_formulas(B, delta_gap, gamma);
        return py::make_tuple(f.labels, f.printed, f.corrected);
      },
      py::arg("B"), py::arg("delta_gap"), py::arg("gamma") = 1.0);

  m.def(
      "simulate",
      [](double A, double inv_temp, double gamma, double delta_gap, double amplitude, double angular_rate,
         double t_start, double t_end, int steps, const std::string& lzs_mode, const std::string& mode) {
        const RateParams params{A, inv_temp, gamma, delta_gap};
        const FieldProfile profile{FieldKind::sinusoid, amplitude, angular_rate, t_start, t_end};
        Trajectory traj;
        {
          py::gil_scoped_release release;
          traj = integrate_magnetization(params, profile, InitialCondition::equilibrium(), steps,
                                         lzs_mode_from_string(lzs_mode), coefficient_mode_from_string(mode));
        }
        const auto rows = static_cast<Eigen::Index>(traj.rows.size());
        Eigen::MatrixXd out(rows, 5);
        for (Eigen::Index i = 0; i < rows; ++i) {
          const TrajectoryRow& r = traj.rows[static_cast<std::size_t>(i)];
          out.row(i) << r.t, r.B, r.M_norm, r.rho00, r.n;
        }
        return out;
      },
      py::arg("A") = 1.0, py::arg("inv_temp") = 1.0, py::arg("gamma") = 1.0, py::arg("delta_gap") = 0.1,
      py::arg("amplitude") = 10.0, py::arg("angular_rate") = 1.0, py::arg("t_start") = 0.0,
      py::arg("t_end") = 6.283185307179586, py::arg("steps") = 100000, py::arg("lzs_mode") = "off",
      py::arg("mode") = "derived",
      "Sinusoidal sweep from equilibrium. Columns: t, B, M_norm, rho00, n.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end in-process; returns (exit code, stdout, stderr).");

  m.def("output_schema_json", [](const std::string& sub) { return cli::output_schema(sub).dump(); },
        py::arg("subcommand"));
}
