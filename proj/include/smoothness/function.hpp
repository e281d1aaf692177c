#pragma once

#include <functional>
#include <string>
#include <utility>

namespace smoothness {

enum class Parity { none, even, odd };

/// A real function on (-1,1) with optional first and second derivatives.
///
/// `d1`/`d2` may be left empty; consumers fall back to finite differences.
struct FunctionHandle {
    std::function<double(double)> eval;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    Parity parity = Parity::none;
    std::string label;

    double operator()(double x) const { return eval(x); }

    bool has_derivatives() const { return static_cast<bool>(d1) && static_cast<bool>(d2); }
};

inline FunctionHandle make_function(std::string label, std::function<double(double)> eval,
                                    std::function<double(double)> d1 = {},
                                    std::function<double(double)> d2 = {},
                                    Parity parity = Parity::none)
{
    return FunctionHandle{std::move(eval), std::move(d1), std::move(d2), parity, std::move(label)};
}

} // namespace smoothness
