#pragma once

// Closed-form model geometries: distance-to-submanifold density, radial
// Laplacian, focal data.  Every integral over one of these manifolds reduces
// to a weighted 1-D radial integral against density(t).

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <functional>
#include <utility>

namespace hardylab::geometry {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

enum class ModelKind {
  EuclideanPoint,    // M = R^m, N = {0}
  EuclideanSubspace, // M = R^m, N = R^n
  CylinderSection,   // M = R x S^n, N = {s0} x S^n (two normal rays)
  CylinderAxis,      // M = R x S^n, N = R x {w0}
  Hemisphere,        // Omega = S^n_+, N = equator
  TorusSubtorus      // M = T^m, N = T^n, tube of radius eta < pi
};

struct ModelSpace {
  ModelKind kind = ModelKind::EuclideanPoint;
  int m = 2;              // ambient dimension
  int n = 0;              // submanifold dimension
  double r_max = kInf;    // supremum of r over the working domain
  double transverse_mass = 1.0;

  int codim() const { return m - n; }

  void check_domain(double t) const {
    if (!(t > 0.0) || t > r_max * (1.0 + 1e-12))
      throw std::domain_error("radius outside (0, r_max): t=" + std::to_string(t));
  }

  // det A(t): Fermi radial density.
  double density(double t) const {
    check_domain(t);
    int k = codim();
    switch (kind) {
      case ModelKind::EuclideanPoint:
      case ModelKind::EuclideanSubspace:
      case ModelKind::TorusSubtorus:
        return std::pow(t, k - 1);
      case ModelKind::CylinderSection:
        return 1.0;
      case ModelKind::CylinderAxis: {
        // zero at the focal radius pi is integrable; floor instead of error
        double d = std::pow(std::sin(t), k - 1);
        return d > 1e-300 ? d : 1e-300;
      }
      case ModelKind::Hemisphere: {
        double d = std::pow(std::cos(t), m - 1);
        return d > 1e-300 ? d : 1e-300;
      }
    }
    throw std::logic_error("unreachable");
  }

  // density(t) / t^(k-1), safe down to t = 0 (limit 1 for trivial Weingarten).
  double density_ratio(double t) const {
    int k = codim();
    if (t < 0.0) throw std::domain_error("negative radius");
    switch (kind) {
      case ModelKind::EuclideanPoint:
      case ModelKind::EuclideanSubspace:
      case ModelKind::TorusSubtorus:
      case ModelKind::CylinderSection:
        return 1.0;
      case ModelKind::CylinderAxis: {
        if (t < 1e-8) return 1.0;               // sin(t)/t -> 1
        double d = std::pow(std::sin(t) / t, k - 1);
        return d > 1e-300 ? d : 1e-300;
      }
      case ModelKind::Hemisphere: {
        (void)k;                                 // k = 1 here
        double d = std::pow(std::cos(t), m - 1);
        return d > 1e-300 ? d : 1e-300;
      }
    }
    throw std::logic_error("unreachable");
  }

  // Delta r at radius t; equals (det A)'/det A.
  double laplacian_r(double t) const {
    check_domain(t);
    int k = codim();
    switch (kind) {
      case ModelKind::EuclideanPoint:
      case ModelKind::EuclideanSubspace:
      case ModelKind::TorusSubtorus:
        return (k - 1) / t;
      case ModelKind::CylinderSection:
        return 0.0;
      case ModelKind::CylinderAxis:
        return (k - 1) / std::tan(t);
      case ModelKind::Hemisphere:
        return -(m - 1) * std::tan(t);
    }
    throw std::logic_error("unreachable");
  }

  std::string id() const {
    switch (kind) {
      case ModelKind::EuclideanPoint:    return "euclidean-point(m=" + std::to_string(m) + ")";
      case ModelKind::EuclideanSubspace: return "euclidean-subspace(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")";
      case ModelKind::CylinderSection:   return "cylinder-section(n=" + std::to_string(n) + ")";
      case ModelKind::CylinderAxis:      return "cylinder-axis(n=" + std::to_string(n) + ")";
      case ModelKind::Hemisphere:        return "hemisphere(n=" + std::to_string(n) + ")";
      case ModelKind::TorusSubtorus:     return "torus-subtorus(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")";
    }
    return "unknown";
  }
};

inline ModelSpace euclidean_point(int m, double r_max = kInf, double mass = 1.0) {
  if (m < 2) throw std::invalid_argument("euclidean_point: m >= 2 required");
  return ModelSpace{ModelKind::EuclideanPoint, m, 0, r_max, mass};
}

inline ModelSpace euclidean_subspace(int m, int n, double r_max = kInf, double mass = 1.0) {
  if (m < 2 || n < 0 || n > m - 1) throw std::invalid_argument("euclidean_subspace: need m>=2, 0<=n<=m-1");
  return ModelSpace{ModelKind::EuclideanSubspace, m, n, r_max, mass};
}

// Two normal rays off {s0} x S^n, carried as doubled transverse mass.
inline ModelSpace cylinder_section(int n, double mass = 2.0) {
  if (n < 1) throw std::invalid_argument("cylinder_section: n >= 1 required");
  return ModelSpace{ModelKind::CylinderSection, n + 1, n, kInf, mass};
}

inline ModelSpace cylinder_axis(int n, double mass = 1.0) {
  if (n < 1) throw std::invalid_argument("cylinder_axis: n >= 1 required");
  return ModelSpace{ModelKind::CylinderAxis, n + 1, 1, kPi, mass};
}

inline ModelSpace hemisphere(int n, double mass = 1.0) {
  if (n < 2) throw std::invalid_argument("hemisphere: n >= 2 required");
  return ModelSpace{ModelKind::Hemisphere, n, n - 1, kPi / 2.0, mass};
}

// Working tube of radius eta < pi, where r and the density are exact.
inline ModelSpace torus_subtorus(int m, int n, double eta = 3.0, double mass = 1.0) {
  if (m < 2 || n < 0 || n > m - 1) throw std::invalid_argument("torus_subtorus: need m>=2, 0<=n<=m-1");
  if (!(eta > 0.0 && eta < kPi)) throw std::invalid_argument("torus_subtorus: need 0 < eta < pi");
  return ModelSpace{ModelKind::TorusSubtorus, m, n, eta, mass};
}

struct RadialDensity {
  std::function<double(double)> density;
  std::function<double(double)> log_derivative; // (det A)'/det A = Delta r
};

inline RadialDensity radial_density(const ModelSpace& model) {
  return RadialDensity{
      [model](double t) { return model.density(t); },
      [model](double t) { return model.laplacian_r(t); }};
}

// s_K: solution of s'' + K s = 0, s(0)=0, s'(0)=1.  Returns (value, derivative).
inline std::pair<double, double> s_K(double K, double t) {
  if (t < 0.0) throw std::domain_error("s_K: t >= 0 required");
  if (K == 0.0) return {t, 1.0};
  if (K > 0.0) {
    double w = std::sqrt(K);
    return {std::sin(w * t) / w, std::cos(w * t)};
  }
  double w = std::sqrt(-K);
  return {std::sinh(w * t) / w, std::cosh(w * t)};
}

} // namespace hardylab::geometry
