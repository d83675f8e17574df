// Copyright the structfem authors.
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "structfem/canonical.hpp"
#include "structfem/covariant.hpp"
#include "structfem/errors.hpp"
#include "structfem/structures.hpp"

namespace py = pybind11;
using namespace structfem;

namespace {

Potential make_potential(const std::string& kind, double c) {
  if (kind == "zero") return zero_potential();
  if (kind == "quadratic") return quadratic_potential(c);
  if (kind == "quartic") return quartic_potential(c);
  throw InvalidArgument("unknown potential '" + kind + "'");
}

SymmetryGenerator make_generator(const std::string& name, int components) {
  if (name == "shift") return shift_generator(components);
  if (name == "rotation") return rotation_generator();
  if (name == "cubic") return cubic_generator();
  throw InvalidArgument("unknown generator '" + name + "'");
}

// Python callable (t, x) -> sequence of m floats.
VectorSampler sampler(py::function f) {
  return [f](const Point& p, std::span<double> v) {
    py::gil_scoped_acquire gil;
    const py::object r = f(p.t, p.x);
    if (py::isinstance<py::float_>(r) || py::isinstance<py::int_>(r)) {
      v[0] = r.cast<double>();
      return;
    }
    const auto vals = r.cast<std::vector<double>>();
    if (vals.size() != v.size()) throw InvalidArgument("sampler returned the wrong number of components");
    std::copy(vals.begin(), vals.end(), v.begin());
  };
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cochain-projection finite elements for first-order Lagrangian field theories";

  static py::exception<Error> error(m, "StructfemError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error;
      py::object inst = exc(e.what());
      inst.attr("kind") = e.kind();
      PyErr_SetObject(exc.ptr(), inst.ptr());
    }
  });

  py::class_<TensorMesh2D, std::shared_ptr<TensorMesh2D>>(m, "TensorMesh2D")
      .def_property_readonly("M", &TensorMesh2D::M)
      .def_property_readonly("N", &TensorMesh2D::N)
      .def_property_readonly("dt", &TensorMesh2D::dt)
      .def_property_readonly("dx", &TensorMesh2D::dx)
      .def_property_readonly("periodic_x", &TensorMesh2D::periodic_x)
      .def_property_readonly("num_nodes", &TensorMesh2D::num_nodes)
      .def_property_readonly("num_elements", &TensorMesh2D::num_elements)
      .def("node_index", &TensorMesh2D::node_index)
      .def("element_index", &TensorMesh2D::element_index)
      .def("node_point", [](const TensorMesh2D& mesh, int n) {
        const Point p = mesh.node_point(n);
        return py::make_tuple(p.t, p.x);
      });

  m.def("build_tensor_mesh",
        [](std::array<double, 2> t, std::array<double, 2> x, int M, int N, bool periodic) {
          return std::const_pointer_cast<TensorMesh2D>(build_tensor_mesh(t, x, M, N, periodic));
        },
        py::arg("t_range"), py::arg("x_range"), py::arg("M"), py::arg("N"), py::arg("periodic_x") = false);

  py::class_<RegularRegion>(m, "RegularRegion")
      .def_property_readonly("elements", &RegularRegion::elements)
      .def_property_readonly("structural_interior_nodes", &RegularRegion::structural_interior_nodes)
      .def_property_readonly("is_full_domain", &RegularRegion::is_full_domain);

  m.def("full_region", [](const std::shared_ptr<TensorMesh2D>& mesh) { return full_region(mesh); });
  m.def("rectangle_region",
        [](const std::shared_ptr<TensorMesh2D>& mesh, int i0, int i1, int j0, int j1) {
          return classify_region(mesh, rectangle_elements(*mesh, i0, i1, j0, j1));
        },
        "Regular region of the element block [i0, i1) x [j0, j1).");
  m.def("classify_region", [](const std::shared_ptr<TensorMesh2D>& mesh, const std::vector<int>& els) {
    return classify_region(mesh, els);
  });

  py::class_<LagrangianDensity>(m, "LagrangianDensity")
      .def_readonly("name", &LagrangianDensity::name)
      .def_readonly("components", &LagrangianDensity::components)
      .def("value", [](const LagrangianDensity& L, double t, double x, const std::vector<double>& f,
                       const std::vector<double>& j) { return L.value({t, x}, f, j); });

  m.def("nonlinear_wave_poisson",
        [](double eps, const std::string& kind, double c) {
          return builtin_nonlinear_wave_poisson(eps, make_potential(kind, c));
        },
        py::arg("epsilon"), py::arg("potential") = "zero", py::arg("coefficient") = 1.0);
  m.def("shift_symmetric_wave", &builtin_shift_symmetric_wave, py::arg("epsilon") = -1.0);
  m.def("so2_pair",
        [](double eps, const std::string& kind, double c, double beta) {
          return builtin_so2_pair(eps, make_potential(kind, c), beta);
        },
        py::arg("epsilon") = -1.0, py::arg("potential") = "quadratic", py::arg("coefficient") = 0.5,
        py::arg("beta") = 0.0);

  py::class_<CovariantProblem, std::shared_ptr<CovariantProblem>>(m, "CovariantProblem")
      .def(py::init([](const std::shared_ptr<TensorMesh2D>& mesh, const LagrangianDensity& L, int qp) {
             return std::make_shared<CovariantProblem>(mesh, L, gauss_rule(qp));
           }),
           py::arg("mesh"), py::arg("density"), py::arg("quadrature_points") = 4)
      .def_property_readonly("num_dofs", &CovariantProblem::num_dofs)
      .def_property_readonly("components", &CovariantProblem::components)
      .def("interpolate", [](const CovariantProblem& P, py::function f) { return interpolate(P, sampler(f)); })
      .def("action", [](const CovariantProblem& P, const Vector& phi, const RegularRegion& U) {
        return assemble_action(P, phi, U);
      })
      .def("residual", [](const CovariantProblem& P, const Vector& phi, const RegularRegion& U) {
        return assemble_residual(P, phi, U);
      })
      .def("jacobian", [](const CovariantProblem& P, const Vector& phi, const RegularRegion& U) {
        return Eigen::MatrixXd(assemble_jacobian(P, phi, U));
      })
      .def("region_dofs", [](const CovariantProblem& P, const RegularRegion& U) {
        const RegionDofs d = region_dofs(P, U);
        return py::make_tuple(d.boundary, d.interior);
      })
      .def("solve",
           [](const CovariantProblem& P, const RegularRegion& U, py::function boundary, double tol, int max_iter) {
             NewtonOptions opt;
             opt.tol = tol;
             opt.max_iter = max_iter;
             const SolveResult r = newton_solve(P, U, dirichlet_from_function(P, U, sampler(boundary)), opt);
             py::dict rep;
             rep["converged"] = r.report.converged;
             rep["iterations"] = r.report.iterations;
             rep["residual_norm"] = r.report.residual_norm;
             rep["linear_solver"] = r.report.linear_solver;
             return py::make_tuple(r.phi, rep);
           },
           py::arg("region"), py::arg("boundary"), py::arg("tol") = 1e-10, py::arg("max_iter") = 50,
           "Newton solve with Dirichlet data boundary(t, x) on the region boundary.");

  m.def("cartan_form", &cartan_form, py::arg("problem"), py::arg("region"), py::arg("phi"), py::arg("V"),
        py::arg("tol") = 1e-10);
  m.def("cartan_form_integral", [](const CovariantProblem& P, const RegularRegion& U, const Vector& phi,
                                   const Vector& V) {
    const CartanTerms t = cartan_form_integral(P, U, phi, V);
    return py::make_tuple(t.flux, t.ring);
  });
  m.def("first_variation_basis", [](const CovariantProblem& P, const RegularRegion& U, const Vector& phi) {
    const FirstVariations fv = first_variation_basis(P, U, phi);
    Eigen::MatrixXd B(P.num_dofs(), static_cast<Eigen::Index>(fv.basis.size()));
    for (std::size_t k = 0; k < fv.basis.size(); ++k) B.col(static_cast<Eigen::Index>(k)) = fv.basis[k];
    return py::make_tuple(B, Eigen::MatrixXd(fv.H), fv.dofs.boundary);
  });
  m.def("multisymplectic_residual",
        [](const Eigen::MatrixXd& H, const std::vector<int>& boundary, const Vector& V, const Vector& W) {
          RegionDofs d;
          d.boundary = boundary;
          return multisymplectic_residual(SparseMatrix(H.sparseView()), d, V, W);
        });
  m.def("noether_check",
        [](const CovariantProblem& P, const RegularRegion& U, const Vector& phi, const std::string& gen) {
          const NoetherReport r = noether_check(P, U, phi, make_generator(gen, P.components()));
          py::dict d;
          d["generator"] = r.generator;
          d["cartan_pairing"] = r.cartan_pairing;
          d["scale"] = r.scale;
          d["invariance_term"] = r.invariance_term;
          d["el_pairing"] = r.el_pairing;
          d["rearrangement_defect"] = r.rearrangement_defect;
          d["consistency_defect"] = r.consistency_defect;
          d["equivariance_residual"] = r.equivariance_residual;
          return d;
        });

  py::class_<PhaseState>(m, "PhaseState")
      .def(py::init([](double t, const Vector& phi, const Vector& pi) { return PhaseState{t, phi, pi}; }),
           py::arg("t"), py::arg("phi"), py::arg("pi"))
      .def_readwrite("t", &PhaseState::t)
      .def_readwrite("phi", &PhaseState::phi)
      .def_readwrite("pi", &PhaseState::pi);

  py::class_<HamiltonianSystem>(m, "HamiltonianSystem")
      .def(py::init([](double lo, double hi, int N, bool periodic, const LagrangianDensity& L, int qp) {
             return HamiltonianSystem(SpatialSpace(IntervalMesh(lo, hi, N, periodic), L.components, qp), L);
           }),
           py::arg("lo"), py::arg("hi"), py::arg("N"), py::arg("periodic"), py::arg("density"),
           py::arg("quadrature_points") = 4)
      .def_property_readonly("num_dofs", &HamiltonianSystem::num_dofs)
      .def("nodes", [](const HamiltonianSystem& s) {
        std::vector<double> x;
        for (int i = 0; i < s.space().num_nodes(); ++i) x.push_back(s.space().mesh().node(i));
        return x;
      })
      .def("mass", [](const HamiltonianSystem& s) { return s.space().mass(); })
      .def("add_generator", [](HamiltonianSystem& s, const std::string& name) {
        return s.add_generator(make_generator(name, s.space().components()));
      })
      .def("legendre", [](const HamiltonianSystem& s, double t, const Vector& phi, const Vector& v) {
        return legendre_transform(s, t, phi, v);
      })
      .def("hamiltonian", [](const HamiltonianSystem& s, const PhaseState& st) { return hamiltonian(s, st); })
      .def("momentum", [](const HamiltonianSystem& s, const PhaseState& st, int g) { return momentum_map(s, st, g); })
      .def("step", [](const HamiltonianSystem& s, const PhaseState& st, double dt) {
        return step_implicit_midpoint(s, st, dt);
      });
}
