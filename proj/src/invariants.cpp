#include "hylambda/invariants.hpp"

#include <cmath>

namespace hylambda {

void validate_reduction(const ReductionData& data) {
    if (data.g < 2) fail(ErrorKind::WrongCount, "reduction data needs genus >= 2");
    const std::size_t want_xi = (data.g - 1) / 2;
    const std::size_t want_delta = data.g / 2;
    if (data.xi.size() != want_xi)
        fail(ErrorKind::WrongCount, "xi must have floor((g-1)/2) entries");
    if (data.delta.size() != want_delta)
        fail(ErrorKind::WrongCount, "delta must have floor(g/2) entries");
    if (data.xi0 < 0) fail(ErrorKind::InvalidArgument, "xi0 must be nonnegative");
    for (long long v : data.xi)
        if (v < 0) fail(ErrorKind::InvalidArgument, "xi entries must be nonnegative");
    for (long long v : data.delta)
        if (v < 0) fail(ErrorKind::InvalidArgument, "delta entries must be nonnegative");
}

long long total_delta(const ReductionData& data) {
    validate_reduction(data);
    long long d = data.xi0;
    for (long long v : data.xi) d += 2 * v;
    for (long long v : data.delta) d += v;
    return d;
}

Rational psi_na(const ReductionData& data) {
    validate_reduction(data);
    const long long g = data.g;
    Rational psi(0);
    psi = psi + Rational(g - 1, 2 * g + 1) * Rational(data.xi0);
    for (std::size_t idx = 0; idx < data.xi.size(); ++idx) {
        const long long j = static_cast<long long>(idx) + 1;
        psi = psi + Rational(6 * j * (g - j - 1) + 2 * g - 2, 2 * g + 1) * Rational(data.xi[idx]);
    }
    for (std::size_t idx = 0; idx < data.delta.size(); ++idx) {
        const long long i = static_cast<long long>(idx) + 1;
        psi = psi + (Rational(12 * i * (g - i), 2 * g + 1) - Rational(1)) * Rational(data.delta[idx]);
    }
    return psi;
}

Rational lambda_na(const ReductionData& data) {
    return (psi_na(data) + Rational(total_delta(data))) * Rational(1, 12);
}

Rational lambda_na_closed(const ReductionData& data) {
    validate_reduction(data);
    const long long g = data.g;
    Rational acc = Rational(g) * Rational(data.xi0);
    for (std::size_t idx = 0; idx < data.xi.size(); ++idx) {
        const long long j = static_cast<long long>(idx) + 1;
        acc = acc + Rational(2 * (j + 1) * (g - j)) * Rational(data.xi[idx]);
    }
    for (std::size_t idx = 0; idx < data.delta.size(); ++idx) {
        const long long i = static_cast<long long>(idx) + 1;
        acc = acc + Rational(4 * i * (g - i)) * Rational(data.delta[idx]);
    }
    return acc * Rational(1, 8 * g + 4);
}

Rational zhang_bound_rhs(long long delta0, const std::vector<long long>& delta_i, int g,
                         bool elementary, std::optional<Rational> c_of_g) {
    if (g < 2) fail(ErrorKind::WrongCount, "bound needs genus >= 2");
    if (delta0 < 0) fail(ErrorKind::InvalidArgument, "delta0 must be nonnegative");
    if (delta_i.size() != static_cast<std::size_t>(g / 2))
        fail(ErrorKind::WrongCount, "delta_i must have floor(g/2) entries");
    for (long long v : delta_i)
        if (v < 0) fail(ErrorKind::InvalidArgument, "delta_i entries must be nonnegative");

    Rational c(0);
    if (elementary)
        c = Rational(g - 1, 6LL * g);
    else if (c_of_g)
        c = *c_of_g;
    else
        fail(ErrorKind::MissingConstant,
             "non-elementary reduction graph: supply c(g) explicitly");

    Rational acc = c * Rational(delta0);
    for (std::size_t idx = 0; idx < delta_i.size(); ++idx) {
        const long long i = static_cast<long long>(idx) + 1;
        acc = acc + Rational(2 * i * (g - i), g) * Rational(delta_i[idx]);
    }
    return acc;
}

namespace {

long long binomial_ll(int n, int k) {
    long long out = 1;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

}  // namespace

double lambda_arch(double log_petersson, int g, double constant_offset) {
    if (g < 2) fail(ErrorKind::WrongCount, "lambda needs genus >= 2");
    const double n = double(binomial_ll(2 * g, g + 1));
    return -g * std::log(2 * 3.14159265358979323846) -
           g * log_petersson / ((8.0 * g + 4.0) * n) + constant_offset;
}

double phi_from_lambda(double lambda, double delta_f, int g) {
    if (g < 2) fail(ErrorKind::WrongCount, "phi needs genus >= 2");
    const double delta = delta_f - 4.0 * g * std::log(2 * 3.14159265358979323846);
    return (6.0 * (2.0 * g + 1.0) / (g - 1.0)) * (lambda - delta / 12.0);
}

double height_decomposition(double gs_self_intersection,
                            const std::vector<std::pair<double, double>>& local_terms, int g) {
    if (g < 2) fail(ErrorKind::WrongCount, "height decomposition needs genus >= 2");
    double acc = (g - 1.0) / (6.0 * (2.0 * g + 1.0)) * gs_self_intersection;
    for (const auto& [lambda_v, log_nv] : local_terms) {
        if (!(log_nv > 0)) fail(ErrorKind::InvalidArgument, "log Nv must be positive");
        acc += lambda_v * log_nv;
    }
    return acc;
}

}  // namespace hylambda
