#pragma once

#include <stdexcept>
#include <string>

namespace plapsys {

/// Parameters of the coupled degenerate system: k components diffusing with
/// the shared coefficient |grad u|^(p-2) + epsilon.
struct SystemParams {
    double p;        // nonlinearity exponent, strictly > 2
    int dim;         // spatial dimension, 1 or 2
    int k;           // number of components
    double epsilon;  // uniform regularization added to the diffusivity

    SystemParams(double p_, int dim_, int k_, double epsilon_ = 0.0)
        : p(p_), dim(dim_), k(k_), epsilon(epsilon_) {
        if (!(p > 2.0))
            throw std::invalid_argument("SystemParams: p must exceed 2, got " +
                                        std::to_string(p));
        if (dim != 1 && dim != 2)
            throw std::invalid_argument("SystemParams: dim must be 1 or 2");
        if (k < 1)
            throw std::invalid_argument("SystemParams: k must be >= 1");
        if (epsilon < 0.0)
            throw std::invalid_argument("SystemParams: epsilon must be >= 0");
    }
};

}  // namespace plapsys
