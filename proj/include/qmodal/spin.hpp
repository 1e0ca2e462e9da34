#pragma once

#include <array>
#include <string>

#include "qmodal/context.hpp"
#include "qmodal/matrix.hpp"

namespace qmodal {

// Dimensionless generators of the rotation group at spin j, built from
// the ladder construction: jz = diag(j, j-1, ..., -j).
struct SpinRepresentation {
    int twoj = 0;  // 2j, a nonnegative integer
    int dim = 0;   // 2j + 1
    ComplexMatrix jx, jy, jz;

    double j() const { return 0.5 * twoj; }
};

// Axis-angle rotation vector (radians).
struct RotationVector {
    std::array<double, 3> u{0.0, 0.0, 0.0};

    double angle() const;
};

// The multiplicative constant matching dimensionless generators to
// physically measured observables.
struct PhysicalScale {
    double hbar = 1.0;
};

// "1/2", "1", "3/2", ... for serialization.
std::string format_spin(int twoj);

SpinRepresentation spin_matrices(double j);

// exp(-i u . j_hat).
ComplexMatrix rotation_unitary(const SpinRepresentation& rep, const RotationVector& u);

// Axis-angle of R_u1 R_u2 via unit quaternions; result angle in [0, pi],
// axis sign fixed by the first nonzero component being positive when the
// angle is pi.
RotationVector rotation_compose(const RotationVector& u1, const RotationVector& u2);

// Unit complex number e^{i phi} with phi = arg Tr(reference^dagger actual);
// the phase that best aligns actual with reference.
complexd relative_phase(const ComplexMatrix& reference, const ComplexMatrix& actual);

// min over phases of ||U_{u1} U_{u2} - e^{i phi} U_{compose(u1,u2)}||_F.
double representation_defect(const SpinRepresentation& rep, const RotationVector& u1,
                             const RotationVector& u2);

// hbar * (axis . j_hat); spectrum {hbar * m : m = -j .. j}.
ComplexMatrix physical_observable(const SpinRepresentation& rep,
                                  const std::array<double, 3>& axis, const PhysicalScale& scale);

// Context of the spin component along `axis`, outcomes ordered by
// descending m (m = +j at index 0, matching the ladder construction).
Context spin_context(const SpinRepresentation& rep, const std::array<double, 3>& axis,
                     const std::string& id);

}  // namespace qmodal
