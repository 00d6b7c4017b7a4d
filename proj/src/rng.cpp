#include "rstop/rng.hpp"

namespace rstop {

NormalSampler::NormalSampler() {
    // layer geometry after Marsaglia-Tsang, magnitudes scaled to 2^56
    const double m = 72057594037927936.0;  // 2^56
    double dn = R;
    double tn = R;
    double q = V / std::exp(-0.5 * dn * dn);
    kn_[0] = static_cast<std::uint64_t>((dn / q) * m);
    kn_[1] = 0;
    wn_[0] = q / m;
    wn_[LAYERS - 1] = dn / m;
    fn_[0] = 1.0;
    fn_[LAYERS - 1] = std::exp(-0.5 * dn * dn);
    for (int i = LAYERS - 2; i >= 1; --i) {
        dn = std::sqrt(-2.0 * std::log(V / dn + std::exp(-0.5 * dn * dn)));
        kn_[i + 1] = static_cast<std::uint64_t>((dn / tn) * m);
        tn = dn;
        fn_[i] = std::exp(-0.5 * dn * dn);
        wn_[i] = dn / m;
    }
}

double NormalSampler::sample(Pcg64& rng) const {
    // uniform on (0, 1]; keeps the logs below finite
    auto uni = [&rng]() {
        return static_cast<double>((rng.next_u64() >> 11) + 1) * 0x1.0p-53;
    };
    for (;;) {
        std::uint64_t u = rng.next_u64();
        int iz = static_cast<int>(u & 127u);
        bool neg = (u >> 7) & 1u;
        std::uint64_t mag = u >> 8;  // 56-bit magnitude
        double x = static_cast<double>(mag) * wn_[iz];
        if (mag < kn_[iz]) return neg ? -x : x;  // rectangle core
        if (iz == 0) {
            // exact tail beyond R
            double xt, yt;
            do {
                xt = -std::log(uni()) / R;
                yt = -std::log(uni());
            } while (yt + yt < xt * xt);
            return neg ? -(R + xt) : (R + xt);
        }
        if (fn_[iz] + uni() * (fn_[iz - 1] - fn_[iz]) < std::exp(-0.5 * x * x))
            return neg ? -x : x;  // wedge
    }
}

double polar_normal(Pcg64& rng) {
    for (;;) {
        double u = 2.0 * rng.next_double() - 1.0;
        double v = 2.0 * rng.next_double() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

} // namespace rstop
