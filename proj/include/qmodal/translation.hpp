#pragma once

#include "qmodal/context.hpp"
#include "qmodal/matrix.hpp"

namespace qmodal {

// Finite cyclic analog of the translation group: position states on Z_n,
// momentum states in the discrete Fourier basis, and the dimensionless
// generator p_hat with eigenvalues 2 pi k / n.
struct CyclicTranslationRep {
    int n = 0;
    Context position_context;  // standard basis
    Context momentum_context;  // Fourier basis
    ComplexMatrix p_dimensionless;
};

CyclicTranslationRep cyclic_translation_rep(int n);

// T_a = exp(-i a p_hat); a = 1 shifts position x to x+1 mod n.
ComplexMatrix translation_unitary(const CyclicTranslationRep& rep, double a);

}  // namespace qmodal
