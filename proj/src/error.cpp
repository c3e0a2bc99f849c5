#include "apclust/error.hpp"

namespace apclust {

int exit_code(const Error& e) noexcept {
    if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
        dynamic_cast<const DerivationError*>(&e) || dynamic_cast<const GenerationError*>(&e)) {
        return 2;
    }
    if (dynamic_cast<const ResourceError*>(&e)) return 3;
    if (dynamic_cast<const ConvergenceError*>(&e)) return 4;
    return 1;
}

}  // namespace apclust
