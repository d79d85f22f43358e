#include "kslab/linalg.hpp"

#include <string>

#include <lapacke.h>

#include "kslab/errors.hpp"

namespace kslab {

namespace {

lapack_complex_double* raw(CMatrix& m) { return reinterpret_cast<lapack_complex_double*>(m.data()); }

void check(lapack_int info, const char* what) {
    if (info != 0) throw NumericError(std::string(what) + " failed with info=" + std::to_string(info));
}

}  // namespace

RVector hermitian_eigenvalues(const CMatrix& H) {
    if (H.rows() != H.cols()) throw InputError("hermitian_eigenvalues: matrix is not square");
    const lapack_int n = static_cast<lapack_int>(H.rows());
    RVector w(n);
    if (n == 0) return w;
    CMatrix a = H;
    check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, raw(a), n, w.data()), "zheevd");
    return w;
}

HermitianEigen hermitian_eigensystem(const CMatrix& H) {
    if (H.rows() != H.cols()) throw InputError("hermitian_eigensystem: matrix is not square");
    const lapack_int n = static_cast<lapack_int>(H.rows());
    HermitianEigen out{RVector(n), H};
    if (n == 0) return out;
    check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, raw(out.vectors), n, out.values.data()), "zheevd");
    return out;
}

RVector singular_values(const CMatrix& X) {
    const lapack_int m = static_cast<lapack_int>(X.rows());
    const lapack_int n = static_cast<lapack_int>(X.cols());
    RVector s(std::min(m, n));
    if (s.size() == 0) return s;
    CMatrix a = X;
    check(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, raw(a), m, s.data(), nullptr, 1, nullptr, 1), "zgesdd");
    return s;
}

Svd full_svd(const CMatrix& X) {
    const lapack_int m = static_cast<lapack_int>(X.rows());
    const lapack_int n = static_cast<lapack_int>(X.cols());
    Svd out{CMatrix(m, m), RVector(std::min(m, n)), CMatrix(n, n)};
    if (out.s.size() == 0) return out;
    CMatrix a = X;
    CMatrix vt(n, n);
    check(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, raw(a), m, out.s.data(), raw(out.U), m, raw(vt), n), "zgesdd");
    out.V = vt.adjoint();
    return out;
}

double spectral_norm(const CMatrix& X) {
    if (X.size() == 0) return 0.0;
    return singular_values(X)(0);
}

}  // namespace kslab
