#include "polartri/channel.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polartri {

namespace {

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

ChannelSpec ChannelSpec::erasure(double p) {
    check_probability(p, "erasure probability");
    return ChannelSpec(ChannelKind::erasure, p);
}

ChannelSpec ChannelSpec::binary_symmetric(double p) {
    check_probability(p, "transition probability");
    if (p > 0.5) throw std::domain_error("binary symmetric channel requires p <= 1/2");
    return ChannelSpec(ChannelKind::binary_symmetric, p);
}

std::string to_string(ChannelKind kind) { return kind == ChannelKind::erasure ? "bec" : "bsc"; }

ChannelKind parse_channel_kind(const std::string& s) {
    if (s == "bec" || s == "erasure") return ChannelKind::erasure;
    if (s == "bsc" || s == "binary_symmetric" || s == "dephasing") return ChannelKind::binary_symmetric;
    throw std::invalid_argument("unknown channel kind '" + s + "' (expected bec or bsc)");
}

std::string to_string(const ChannelSpec& ch) {
    std::ostringstream out;
    out << to_string(ch.kind()) << "(" << ch.p() << ")";
    return out.str();
}

double bhattacharyya(const ChannelSpec& ch) {
    double p = ch.p();
    if (ch.is_erasure()) return p;  // only the erasure symbol has mass under both inputs
    return 2.0 * std::sqrt(p * (1.0 - p));
}

double compose_erasure(double p, double q) {
    check_probability(p, "p");
    check_probability(q, "q");
    return p + q - p * q;
}

double compose_bsc(double a, double b) {
    if (!(a >= 0.0 && a <= 0.5) || !(b >= 0.0 && b <= 0.5)) throw std::domain_error("compose_bsc requires a, b in [0, 1/2]");
    return a + b - 2.0 * a * b;
}

ChannelSpec degrade_erasure_to_bsc(double p) {
    check_probability(p, "erasure probability");
    return ChannelSpec::binary_symmetric(p / 2.0);
}

double binary_entropy(double p) {
    check_probability(p, "p");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double capacity(const ChannelSpec& ch) {
    if (ch.is_erasure()) return 1.0 - ch.p();
    return 1.0 - binary_entropy(ch.p());
}

double markov_puncture_bound(double eps, double eps0) {
    if (!(eps > 0.0)) throw std::domain_error("markov_puncture_bound requires eps > 0");
    if (eps0 < eps) throw std::domain_error("markov_puncture_bound requires eps <= eps0");
    return eps / eps0;
}

}  // namespace polartri
