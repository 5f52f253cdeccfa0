#pragma once

#include <string>

namespace polartri {

enum class ChannelKind { erasure, binary_symmetric };

// A binary-input memoryless channel: erasure W_p or binary symmetric V_p.
class ChannelSpec {
   public:
    static ChannelSpec erasure(double p);
    static ChannelSpec binary_symmetric(double p);

    ChannelKind kind() const { return kind_; }
    double p() const { return p_; }
    bool is_erasure() const { return kind_ == ChannelKind::erasure; }

    friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;

   private:
    ChannelSpec(ChannelKind kind, double p) : kind_(kind), p_(p) {}
    ChannelKind kind_;
    double p_;
};

std::string to_string(ChannelKind kind);  // "bec" / "bsc"
ChannelKind parse_channel_kind(const std::string& s);
std::string to_string(const ChannelSpec& ch);

// sum_y sqrt(W(y|0) W(y|1)), without a 1/2 prefactor: 0 for a noiseless channel, 1 for a
// useless one.
double bhattacharyya(const ChannelSpec& ch);

// Erasure W_p followed by W_q is W_{p+q-pq}.
double compose_erasure(double p, double q);
// V_a followed by V_b is V_{a+b-2ab}.
double compose_bsc(double a, double b);
// W_p degrades to V_{p/2}.
ChannelSpec degrade_erasure_to_bsc(double p);

double binary_entropy(double p);
double capacity(const ChannelSpec& ch);

// Markov bound eps/eps0 on drawing a puncture pattern whose bit error rate exceeds eps0.
double markov_puncture_bound(double eps, double eps0);

}  // namespace polartri
