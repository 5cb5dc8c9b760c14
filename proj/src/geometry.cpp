#include "riopt/geometry.hpp"

namespace riopt {

// Explicit instantiations for the scalar types used across the library.
template Scalar zeta<Scalar>(Scalar, Scalar);
template Scalar delta<Scalar>(Scalar, Scalar);
template float zeta<float>(float, float);
template float delta<float>(float, float);

}  // namespace riopt
