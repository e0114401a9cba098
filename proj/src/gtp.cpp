#include "bellgame/gtp.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "bellgame/prng.hpp"

namespace bellgame::gtp {

BettingDistribution::BettingDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
    if (weights_.size() < 2)
        throw std::invalid_argument("betting distribution needs an alphabet of size >= 2");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("betting weights must be strictly positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("betting weights must sum to 1");
}

BettingDistribution uniform_bet(std::size_t alphabet) {
    return BettingDistribution(std::vector<double>(alphabet, 1.0 / static_cast<double>(alphabet)));
}

double LogCapital::total_log() const {
    if (locked_log == -std::numeric_limits<double>::infinity()) return log_value;
    const double hi = std::max(log_value, locked_log);
    const double lo = std::min(log_value, locked_log);
    return hi + std::log1p(std::exp(lo - hi));
}

LogCapital capital_update(LogCapital k, const BettingDistribution& bet,
                          const BettingDistribution& odds, std::size_t observed) {
    if (observed >= bet.size() || bet.size() != odds.size())
        throw GameError("capital_update: symbol outside the alphabet");
    k.log_value += std::log(bet[observed]) - std::log(odds[observed]);
    if (!std::isfinite(k.log_value))
        throw GameError("capital_update: non-finite capital (zero weight upstream?)");
    if (k.thrift) {
        while (k.total_log() >= k.next_threshold_exponent * std::numbers::ln2) {
            // lock half of the bettable capital
            const double half = k.log_value - std::numbers::ln2;
            if (k.locked_log == -std::numeric_limits<double>::infinity()) {
                k.locked_log = half;
            } else {
                const double hi = std::max(k.locked_log, half);
                const double lo = std::min(k.locked_log, half);
                k.locked_log = hi + std::log1p(std::exp(lo - hi));
            }
            k.log_value = half;
            ++k.next_threshold_exponent;
        }
    }
    return k;
}

FrequencyCounts::FrequencyCounts(std::size_t alphabet) : counts(alphabet, 0) {
    if (alphabet < 2) throw std::invalid_argument("alphabet of size 1 makes betting vacuous");
}

void FrequencyCounts::add(std::size_t symbol) {
    if (symbol >= counts.size()) throw GameError("symbol outside the alphabet");
    ++counts[symbol];
    ++total;
}

BettingDistribution kt_bet(const FrequencyCounts& counts) {
    const std::size_t a = counts.alphabet();
    const double denom = static_cast<double>(counts.total) + static_cast<double>(a) / 2.0;
    std::vector<double> w(a);
    for (std::size_t i = 0; i < a; ++i)
        w[i] = (static_cast<double>(counts.counts[i]) + 0.5) / denom;
    return BettingDistribution(std::move(w));
}

SymbolStream iid_stream(std::vector<double> weights, std::uint64_t seed) {
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("stream weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("stream weights must sum to 1");
    auto rng = std::make_shared<Xoshiro256ss>(seed);
    auto w = std::make_shared<std::vector<double>>(std::move(weights));
    return [rng, w]() -> std::optional<std::size_t> { return rng->sample(*w); };
}

PredictiveTrajectory run_predictive_game(const BettingDistribution& odds,
                                         const SymbolStream& reality,
                                         const PredictiveOptions& options) {
    if (options.rounds < 1) throw ConfigError("rounds must be >= 1");
    if (options.snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");

    PredictiveTrajectory out;
    out.final_counts = FrequencyCounts(odds.size());
    LogCapital capital = options.thrift ? LogCapital::thrifted() : LogCapital::plain();
    out.max_log_value = capital.log_value;

    for (std::uint64_t n = 1; n <= options.rounds; ++n) {
        const BettingDistribution bet = kt_bet(out.final_counts);
        const std::optional<std::size_t> symbol = reality();
        if (!symbol) throw StreamExhausted("reality stream ended at round " + std::to_string(n), n);
        if (*symbol >= odds.size()) throw GameError("stream produced a symbol outside the alphabet", n);

        capital = capital_update(capital, bet, odds, *symbol);
        out.final_counts.add(*symbol);
        out.max_log_value = std::max(out.max_log_value, capital.log_value);

        if (n % options.snapshot_stride == 0 || n == options.rounds) {
            double err = 0.0;
            for (std::size_t a = 0; a < odds.size(); ++a) {
                const double freq =
                    static_cast<double>(out.final_counts.counts[a]) / static_cast<double>(n);
                err = std::max(err, std::abs(freq - odds[a]));
            }
            out.snapshots.push_back(
                {n, *symbol, capital, out.final_counts.counts, err});
        }
    }
    out.final_capital = capital;
    return out;
}

}  // namespace bellgame::gtp
