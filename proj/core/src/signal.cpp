#include "fsosnr/signal.hpp"

#include "fsosnr/error.hpp"

#include <algorithm>
#include <cmath>

namespace fsosnr {

double average_power(std::span<const Complex> x)
{
    if (x.empty()) throw Error("empty input");
    double acc = 0.0;
    for (const auto& s : x) acc += std::norm(s);
    return acc / static_cast<double>(x.size());
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

double linear_to_db(double x)
{
    if (!(x > 0.0)) throw Error("non-positive power");
    return 10.0 * std::log10(x);
}

bool all_finite(std::span<const Complex> x) noexcept
{
    return std::all_of(x.begin(), x.end(),
                       [](const Complex& s) { return std::isfinite(s.real()) && std::isfinite(s.imag()); });
}

void validate(const IqStream& s)
{
    if (!(s.sample_rate > 0.0)) throw Error("sample_rate must be positive");
    if (s.samples.empty()) throw Error("empty input");
    if (!all_finite(s.samples)) throw Error("non-finite sample");
}

void validate(const SymbolBlock& b)
{
    if (!(b.symbol_rate > 0.0)) throw Error("symbol_rate must be positive");
    if (b.symbols.empty()) throw Error("empty input");
    if (!all_finite(b.symbols)) throw Error("non-finite sample");
}

} // namespace fsosnr
