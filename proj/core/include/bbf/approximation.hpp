#ifndef BBF_APPROXIMATION_HPP
#define BBF_APPROXIMATION_HPP

#include "bbf/types.hpp"

namespace bbf {

// Dense reconstructions above this size are refused outright.
inline constexpr Index kHardDenseCap = 20000;
inline constexpr Index kDefaultDenseCap = 8192;

/// Common surface of every kernel approximation K_hat, indexed in the
/// original point order.
class KernelApproximation {
public:
    virtual ~KernelApproximation() = default;

    virtual Index n() const = 0;
    virtual Vector apply(const Vector& v) const = 0;
    virtual double entry(Index a, Index b) const = 0;
    virtual Matrix to_dense(Index cap = kDefaultDenseCap) const = 0;
    // Stored scalars, under the accounting convention of the method.
    virtual double memory_count() const = 0;
};

// Throws CapExceeded when n exceeds cap or cap exceeds the hard limit.
void check_dense_cap(Index n, Index cap);

} // namespace bbf

#endif
