#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <string>
#include <vector>

#include "stiefel_cayley/cover.hpp"
#include "stiefel_cayley/errors.hpp"
#include "stiefel_cayley/group.hpp"
#include "stiefel_cayley/optim.hpp"
#include "stiefel_cayley/stiefel.hpp"

namespace py = pybind11;
namespace sc = stiefel_cayley;
using sc::Field;
using sc::Mat;

namespace {

// float64 (r, c) -> real, complex128 (r, c) -> complex,
// float64 (r, c, 4) -> quaternion with components (w, x, y, z).
Mat to_mat(const py::array& a) {
  if (py::isinstance<py::array_t<std::complex<double>>>(a) ||
      a.dtype().kind() == 'c') {
    auto c = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>::ensure(a);
    if (!c || c.ndim() != 2) throw sc::ShapeMismatch("complex matrix must be 2-D");
    const auto r = static_cast<std::size_t>(c.shape(0));
    const auto k = static_cast<std::size_t>(c.shape(1));
    std::vector<double> data;
    data.reserve(2 * r * k);
    const auto* p = c.data();
    for (std::size_t i = 0; i < r * k; ++i) {
      data.push_back(p[i].real());
      data.push_back(p[i].imag());
    }
    return Mat::from_components(Field::Complex, r, k, std::move(data));
  }
  auto d = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(a);
  if (!d) throw sc::InvalidArgument("expected a numeric array");
  if (d.ndim() == 2) {
    const auto r = static_cast<std::size_t>(d.shape(0));
    const auto k = static_cast<std::size_t>(d.shape(1));
    return Mat::from_components(Field::Real, r, k,
                                std::vector<double>(d.data(), d.data() + r * k));
  }
  if (d.ndim() == 3 && d.shape(2) == 4) {
    const auto r = static_cast<std::size_t>(d.shape(0));
    const auto k = static_cast<std::size_t>(d.shape(1));
    return Mat::from_components(Field::Quaternion, r, k,
                                std::vector<double>(d.data(), d.data() + 4 * r * k));
  }
  throw sc::ShapeMismatch("expected (r, c) or (r, c, 4) array");
}

py::array from_mat(const Mat& m) {
  const auto r = static_cast<py::ssize_t>(m.rows());
  const auto k = static_cast<py::ssize_t>(m.cols());
  const auto src = m.components();
  switch (m.field()) {
    case Field::Real: {
      py::array_t<double> out({r, k});
      std::copy(src.begin(), src.end(), out.mutable_data());
      return out;
    }
    case Field::Complex: {
      py::array_t<std::complex<double>> out({r, k});
      auto* p = out.mutable_data();
      for (std::size_t i = 0; i < m.rows() * m.cols(); ++i)
        p[i] = {src[2 * i], src[2 * i + 1]};
      return out;
    }
    case Field::Quaternion: {
      py::array_t<double> out({r, k, py::ssize_t{4}});
      std::copy(src.begin(), src.end(), out.mutable_data());
      return out;
    }
  }
  throw sc::InternalError("from_mat: unknown field");
}

sc::Lift make_lift(const py::array& a, std::size_t k) {
  return sc::Lift(sc::GroupElement(to_mat(a)), k);
}

py::dict trace_dict(const sc::OptimTrace& trace) {
  py::list f, gnorm;
  for (const auto& r : trace.records) {
    f.append(r.f);
    gnorm.append(r.gnorm);
  }
  py::dict d;
  d["x"] = from_mat(trace.final().x.matrix());
  d["f"] = f;
  d["gnorm"] = gnorm;
  d["iterations"] = trace.final().iter;
  d["reason"] = std::string(sc::to_string(trace.reason));
  return d;
}

sc::SearchParams search_params(double grad_tol, std::size_t max_iters) {
  sc::SearchParams p;
  p.grad_tol = grad_tol;
  p.max_iters = max_iters;
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cayley charts and contractible covers of Stiefel manifolds";

  auto base = py::register_exception<sc::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<sc::SingularMatrix>(m, "SingularMatrix", base.ptr());
  py::register_exception<sc::InvalidTangent>(m, "InvalidTangent", base.ptr());
  py::register_exception<sc::OutsideCayleyOpen>(m, "OutsideCayleyOpen", base.ptr());
  py::register_exception<sc::NotOnManifold>(m, "NotOnManifold", base.ptr());
  py::register_exception<sc::RankDeficient>(m, "RankDeficient", base.ptr());
  py::register_exception<sc::DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<sc::NotHermitian>(m, "NotHermitian", base.ptr());
  py::register_exception<sc::FieldMismatch>(m, "FieldMismatch", base.ptr());
  py::register_exception<sc::ShapeMismatch>(m, "ShapeMismatch", base.ptr());
  py::register_exception<sc::InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<sc::InternalError>(m, "InternalError", base.ptr());

  m.def("field_of", [](const py::array& a) {
    return std::string(sc::to_string(to_mat(a).field()));
  });
  m.def("multiply", [](const py::array& a, const py::array& b) {
    return from_mat(to_mat(a) * to_mat(b));
  });
  m.def("adjoint", [](const py::array& a) { return from_mat(to_mat(a).adjoint()); });
  m.def("inverse", [](const py::array& a, double tol) {
    return from_mat(sc::mat_inverse(to_mat(a), tol));
  }, py::arg("a"), py::arg("tol") = sc::kSingularTol);

  m.def("cayley", [](const py::array& a) {
    return from_mat(sc::cayley_at_identity(to_mat(a)));
  }, "(I - M)(I + M)^{-1}");
  m.def("cayley_at", [](const py::array& a, const py::array& x) {
    return from_mat(sc::cayley_at(sc::GroupElement(to_mat(a)), to_mat(x)));
  }, "(I - A^* X)(A + X)^{-1}");

  m.def("random_stiefel_point", [](std::size_t n, std::size_t k, const std::string& field,
                                   std::uint64_t seed) {
    return from_mat(sc::random_stiefel_point(n, k, sc::parse_field(field), seed).matrix());
  }, py::arg("n"), py::arg("k"), py::arg("field") = "real", py::arg("seed") = 0);
  m.def("complete_lift", [](const py::array& x) {
    return from_mat(sc::complete_lift(sc::StiefelPoint(to_mat(x))).matrix());
  }, "Unitary A whose last k columns are x.");
  m.def("rho", [](const py::array& a, std::size_t k) {
    return from_mat(sc::rho(sc::GroupElement(to_mat(a)), k).matrix());
  });

  m.def("gamma", [](const py::array& a, std::size_t k, const py::array& x,
                    const py::array& y) {
    const sc::TangentCoords t(make_lift(a, k), to_mat(x), to_mat(y));
    return from_mat(sc::gamma(t).matrix());
  }, py::arg("a"), py::arg("k"), py::arg("X"), py::arg("Y"));
  m.def("gamma_inverse", [](const py::array& a, std::size_t k, const py::array& y) {
    const auto t = sc::gamma_inverse(make_lift(a, k), sc::StiefelPoint(to_mat(y)));
    return py::make_tuple(from_mat(t.x()), from_mat(t.y()));
  }, py::arg("a"), py::arg("k"), py::arg("y"));
  m.def("in_cayley_open", [](const py::array& x, const py::array& y) {
    return sc::in_cayley_open(sc::StiefelPoint(to_mat(x)), sc::StiefelPoint(to_mat(y)));
  });
  m.def("in_injectivity_domain", [](const py::array& a, std::size_t k,
                                    const py::array& x, const py::array& y) {
    return sc::in_injectivity_domain(sc::TangentCoords(make_lift(a, k), to_mat(x), to_mat(y)));
  }, py::arg("a"), py::arg("k"), py::arg("X"), py::arg("Y"));
  m.def("local_section", [](const py::array& a, std::size_t k, const py::array& y) {
    return from_mat(sc::local_section(make_lift(a, k), sc::StiefelPoint(to_mat(y))).matrix());
  }, py::arg("a"), py::arg("k"), py::arg("y"));
  m.def("contraction", [](const py::array& a, std::size_t k, const py::array& y, double t) {
    return from_mat(sc::contraction(make_lift(a, k), sc::StiefelPoint(to_mat(y)), t).matrix());
  }, py::arg("a"), py::arg("k"), py::arg("y"), py::arg("t"));

  m.def("minimize_rayleigh", [](const py::array& h, const py::array& x0, double grad_tol,
                                std::size_t max_iters) {
    const auto trace = sc::gradient_descent(sc::rayleigh_objective(to_mat(h)),
                                            sc::StiefelPoint(to_mat(x0)),
                                            search_params(grad_tol, max_iters));
    return trace_dict(trace);
  }, py::arg("h"), py::arg("x0"), py::arg("grad_tol") = 1e-6, py::arg("max_iters") = 5000,
     "Minimize Re tr(x^* H x) over the Stiefel manifold.");
  m.def("minimize_procrustes", [](const py::array& b, const py::array& c, const py::array& x0,
                                  double grad_tol, std::size_t max_iters) {
    const auto trace = sc::gradient_descent(sc::procrustes_objective(to_mat(b), to_mat(c)),
                                            sc::StiefelPoint(to_mat(x0)),
                                            search_params(grad_tol, max_iters));
    return trace_dict(trace);
  }, py::arg("b"), py::arg("c"), py::arg("x0"), py::arg("grad_tol") = 1e-6,
     py::arg("max_iters") = 5000, "Minimize ||x B - C||_F^2.");

  m.def("verify_cover", [](std::size_t n, std::size_t k, const std::string& field,
                           std::size_t samples, std::uint64_t seed) {
    const auto r = sc::verify_cover(n, k, sc::parse_field(field),
                                    sc::ThetaLadder::evenly_spaced(k), samples, seed);
    py::dict hist;
    for (const auto& [mult, count] : r.multiplicity_histogram) hist[py::int_(mult)] = count;
    py::dict d;
    d["samples"] = r.samples;
    d["uncovered"] = r.uncovered;
    d["angles"] = r.angles;
    d["multiplicity_histogram"] = hist;
    return d;
  }, py::arg("n"), py::arg("k"), py::arg("field") = "quaternion", py::arg("samples") = 10000,
     py::arg("seed") = 0);
}
