#include "qdmnp/quantum_core.hpp"

namespace qdmnp {

template struct SystemOperators<double>;
template SystemOperators<double> build_system_operators<double>(const HilbertSpace&);

}  // namespace qdmnp
