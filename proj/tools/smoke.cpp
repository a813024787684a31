#include "gtr/channel.hpp"
#include "gtr/io.hpp"
#include "gtr/lowerbound.hpp"
#include "gtr/metrics.hpp"
#include "gtr/reconstruct.hpp"
#include <cstdio>
int main() {
    gtr::Rng rng(42);
    auto s = gtr::draw_random_instance(8, rng);
    auto d = gtr::exact_trace_distribution(s, gtr::ChannelParams(0.3));
    std::printf("mass=%.12f\n", gtr::total_mass(d));
    std::printf("binom=%.6f\n", gtr::binom_pmf(4, 0.5, 2));
    std::printf("mgf id: %.10g %.10g\n", gtr::cos_power_mgf_closed(3, 0.0),
                gtr::cos_power_mgf_quadrature(3, 0.0));
    return 0;
}
