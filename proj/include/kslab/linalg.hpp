#pragma once

#include "kslab/types.hpp"

namespace kslab {

// eigenvalues (ascending) of a Hermitian matrix; only the upper triangle is read
RVector hermitian_eigenvalues(const CMatrix& H);

struct HermitianEigen {
    RVector values;
    CMatrix vectors;
};
HermitianEigen hermitian_eigensystem(const CMatrix& H);

// singular values, descending
RVector singular_values(const CMatrix& X);

struct Svd {
    CMatrix U;
    RVector s;
    CMatrix V;  // X = U diag(s) V^H
};
Svd full_svd(const CMatrix& X);

double spectral_norm(const CMatrix& X);

}  // namespace kslab
