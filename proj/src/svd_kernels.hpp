#ifndef TWCTV_SVD_KERNELS_HPP
#define TWCTV_SVD_KERNELS_HPP

// Internal slice SVD kernels. LAPACKE dgesdd/zgesdd carry the per-slice work;
// Eigen's JacobiSVD is the fallback when divide-and-conquer fails to converge
// on a slice.

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <lapacke.h>

namespace twctv::detail {

struct RealSvd {
  Eigen::MatrixXd u, v;
  Eigen::VectorXd s;
};

struct ComplexSvd {
  Eigen::MatrixXcd u, v;
  Eigen::VectorXd s;
};

inline RealSvd svd_real(const Eigen::MatrixXd& a, bool thin) {
  const lapack_int m = lapack_int(a.rows()), n = lapack_int(a.cols());
  const lapack_int k = std::min(m, n);
  Eigen::MatrixXd work = a;
  RealSvd out;
  out.s.resize(k);
  const char jobz = thin ? 'S' : 'A';
  out.u.resize(m, thin ? k : m);
  Eigen::MatrixXd vt(thin ? k : n, n);
  const lapack_int info =
      LAPACKE_dgesdd(LAPACK_COL_MAJOR, jobz, m, n, work.data(), m, out.s.data(), out.u.data(),
                     m, vt.data(), lapack_int(vt.rows()));
  if (info != 0) {
    const unsigned opts = thin ? (Eigen::ComputeThinU | Eigen::ComputeThinV)
                               : (Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, opts);
    return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
  }
  out.v = vt.transpose();
  return out;
}

inline ComplexSvd svd_complex(const Eigen::MatrixXcd& a, bool thin) {
  const lapack_int m = lapack_int(a.rows()), n = lapack_int(a.cols());
  const lapack_int k = std::min(m, n);
  Eigen::MatrixXcd work = a;
  ComplexSvd out;
  out.s.resize(k);
  const char jobz = thin ? 'S' : 'A';
  out.u.resize(m, thin ? k : m);
  Eigen::MatrixXcd vt(thin ? k : n, n);
  const lapack_int info = LAPACKE_zgesdd(
      LAPACK_COL_MAJOR, jobz, m, n, reinterpret_cast<lapack_complex_double*>(work.data()), m,
      out.s.data(), reinterpret_cast<lapack_complex_double*>(out.u.data()), m,
      reinterpret_cast<lapack_complex_double*>(vt.data()), lapack_int(vt.rows()));
  if (info != 0) {
    const unsigned opts = thin ? (Eigen::ComputeThinU | Eigen::ComputeThinV)
                               : (Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, opts);
    return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
  }
  out.v = vt.adjoint();
  return out;
}

inline Eigen::VectorXd singular_values_real(const Eigen::MatrixXd& a) {
  const lapack_int m = lapack_int(a.rows()), n = lapack_int(a.cols());
  Eigen::MatrixXd work = a;
  Eigen::VectorXd s(std::min(m, n));
  const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(),
                                         nullptr, m, nullptr, 1);
  if (info != 0) return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  return s;
}

inline Eigen::VectorXd singular_values_complex(const Eigen::MatrixXcd& a) {
  const lapack_int m = lapack_int(a.rows()), n = lapack_int(a.cols());
  Eigen::MatrixXcd work = a;
  Eigen::VectorXd s(std::min(m, n));
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, reinterpret_cast<lapack_complex_double*>(work.data()),
                     m, s.data(), nullptr, m, nullptr, 1);
  if (info != 0) return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues();
  return s;
}

}  // namespace twctv::detail

#endif
