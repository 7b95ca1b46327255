#include "smce/simulate.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "smce/codec.hpp"
#include "smce/error.hpp"
#include "smce/rng.hpp"

namespace smce {

namespace {

// Runs body(index) for index in [0, count) on up to `threads` workers. Each
// worker gets its own state from make_state().
template <class MakeState, class Body>
void parallel_for(std::uint64_t count, unsigned threads, MakeState make_state, Body body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(count, 1))));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        auto state = make_state();
        for (std::uint64_t i; (i = next.fetch_add(1)) < count;) body(state, i);
    };
    if (threads == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// Indices of a length-n block sorted by decreasing |y|.
void rank_by_reliability(const std::vector<double>& y, std::vector<std::uint32_t>& order) {
    order.resize(y.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return std::fabs(y[a]) > std::fabs(y[b]); });
}

void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParams("sigma must be positive");
}

}  // namespace

double DfrResult::mean_attempts() const {
    std::uint64_t total = 0, count = 0;
    for (auto [a, c] : attempts_histogram) {
        total += static_cast<std::uint64_t>(a) * c;
        count += c;
    }
    return count ? static_cast<double>(total) / count : 0.0;
}

std::string DfrResult::summary_line(const SystemParams& p) const {
    std::ostringstream os;
    os << "n0=" << p.n0 << ",r=" << p.r << ",d_v=" << p.d_v << ",sigma=" << p.sigma << ",t_lower=" << p.t_lower
       << ",trials=" << trials << ",failures=" << failures << ",miscorrections=" << miscorrections
       << ",mean_attempts=" << mean_attempts() << ",wall_seconds=" << wall_seconds;
    return os.str();
}

DfrResult dfr_trial_batch(const SystemParams& params, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    params.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto keys = generate_keypair(params, derive_seed(seed, 0));

    struct Worker {
        Decryptor dec;
        DfrResult partial;
    };
    std::mutex merge_mutex;
    DfrResult total;
    std::vector<std::unique_ptr<Worker>> workers;

    parallel_for(
        trials, threads,
        [&] {
            std::lock_guard lock(merge_mutex);
            workers.push_back(std::make_unique<Worker>(Worker{Decryptor(keys.private_key), {}}));
            return workers.back().get();
        },
        [&](Worker* w, std::uint64_t t) {
            Engine rng(derive_seed(seed, 2 * t + 1));
            boost::random::uniform_int_distribution<int> bit(0, 1);
            Bits msg(params.k());
            for (auto& b : msg) b = static_cast<std::uint8_t>(bit(rng));
            const auto cw = encode(msg, keys.public_key);
            const auto noise = sample_noise(cw, params, derive_seed(seed, 2 * t + 2));
            const auto ct = encrypt_with_noise(msg, keys.public_key, noise.samples);
            const auto res = w->dec.decrypt(ct);
            auto& part = w->partial;
            ++part.trials;
            ++part.attempts_histogram[noise.attempts];
            if (!res.ok()) ++part.failures;
            else if (*res.message != msg) ++part.miscorrections;
        });

    for (const auto& w : workers) {
        total.trials += w->partial.trials;
        total.failures += w->partial.failures;
        total.miscorrections += w->partial.miscorrections;
        for (auto [a, c] : w->partial.attempts_histogram) total.attempts_histogram[a] += c;
    }
    total.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return total;
}

std::vector<double> OrderStats::frequencies() const {
    std::vector<double> f(error_counts.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = trials ? static_cast<double>(error_counts[i]) / trials : 0.0;
    return f;
}

OrderStats ordered_error_oracle(std::uint32_t n, double sigma, std::uint64_t trials, std::uint64_t seed,
                                unsigned threads) {
    if (n == 0 || n > 10000) throw InvalidParams("order-statistics oracle needs 0 < n <= 10000");
    check_sigma(sigma);
    struct State {
        std::vector<double> y;
        std::vector<std::uint32_t> order;
        std::vector<std::uint64_t> counts;
    };
    std::mutex m;
    std::vector<std::unique_ptr<State>> states;
    parallel_for(
        trials, threads,
        [&] {
            std::lock_guard lock(m);
            states.push_back(std::make_unique<State>());
            states.back()->y.resize(n);
            states.back()->counts.assign(n, 0);
            return states.back().get();
        },
        [&](State* s, std::uint64_t t) {
            Engine rng(derive_seed(seed, t));
            boost::random::normal_distribution<double> gauss(-1.0, sigma);
            for (auto& v : s->y) v = gauss(rng);
            rank_by_reliability(s->y, s->order);
            for (std::uint32_t i = 0; i < n; ++i) {
                if (s->y[s->order[i]] > 0.0) ++s->counts[i];
            }
        });
    OrderStats out;
    out.trials = trials;
    out.error_counts.assign(n, 0);
    for (const auto& s : states) {
        for (std::uint32_t i = 0; i < n; ++i) out.error_counts[i] += s->counts[i];
    }
    return out;
}

FlipDemo soft_attack_demo(std::uint32_t n, double sigma, std::uint32_t t_f, std::uint64_t trials, std::uint64_t seed) {
    if (n == 0 || n > 500) throw InvalidParams("flip demo needs 0 < n <= 500");
    if (t_f > n) throw InvalidParams("t_f exceeds n");
    check_sigma(sigma);
    FlipDemo out;
    out.trials = trials;
    std::vector<double> y(n);
    std::vector<std::uint32_t> order;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Engine rng(derive_seed(seed, t));
        boost::random::normal_distribution<double> gauss(-1.0, sigma);
        for (auto& v : y) v = gauss(rng);
        std::vector<std::uint8_t> hard(n);
        std::uint32_t t_star = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            hard[i] = y[i] > 0.0;
            t_star += hard[i];
        }
        rank_by_reliability(y, order);
        bool all_err = true;
        for (std::uint32_t j = 0; j < t_f; ++j) {
            const auto pos = order[n - 1 - j];
            all_err = all_err && hard[pos];
            hard[pos] ^= 1u;
        }
        if (!all_err) continue;
        ++out.successes;
        const auto residual = static_cast<std::uint32_t>(std::count(hard.begin(), hard.end(), 1));
        if (residual == t_star - t_f) ++out.residual_ok;
    }
    return out;
}

}  // namespace smce
