#include <zreg/scalar.hpp>
#include <zreg/special.hpp>

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>

#include <cmath>
#include <map>
#include <mutex>

namespace zreg::special
{

namespace
{

bool at_pole(double x) { return x <= 0 && x == std::floor(x); }

} // namespace

double gamma(double x)
{
    if (at_pole(x)) {
        throw Error("Gamma pole at " + std::to_string(x));
    }
    return boost::math::tgamma(x);
}

double polygamma(int n, double x)
{
    if (at_pole(x)) {
        throw Error("polygamma pole at " + std::to_string(x));
    }
    static std::mutex mutex;
    static std::map<std::pair<int, double>, double> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find({n, x}); it != cache.end()) {
            return it->second;
        }
    }
    // psi^(n)(x) = psi^(n)(x+1) - (-1)^n n! / x^(n+1)
    double shift = 0.0;
    double y = x;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double nfact = boost::math::factorial<double>(static_cast<unsigned>(n));
    while (y < 1.0) {
        shift -= sign * nfact / std::pow(y, n + 1);
        y += 1.0;
    }
    const double value = boost::math::polygamma(n, y) + shift;
    std::lock_guard lock(mutex);
    cache.emplace(std::pair{n, x}, value);
    return value;
}

} // namespace zreg::special
