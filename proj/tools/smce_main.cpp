// smce: key generation, file encryption, security estimation and simulations.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smce/codec.hpp"
#include "smce/density_evolution.hpp"
#include "smce/error.hpp"
#include "smce/keys.hpp"
#include "smce/message.hpp"
#include "smce/rng.hpp"
#include "smce/security.hpp"
#include "smce/simulate.hpp"

namespace {

enum Exit { kOk = 0, kValidation = 2, kDecodeFailure = 3, kIo = 4 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write failed for " + path);
}

void write_text(const std::string& path, const std::string& text) {
    write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

// --seed, else SMCE_SEED, else nondeterministic.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("SMCE_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used, 0);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw smce::InvalidParams("SMCE_SEED is not an unsigned integer");
    }
    std::random_device rd;
    return (std::uint64_t{rd()} << 32) ^ rd();
}

struct ParamFlags {
    std::string preset;
    std::optional<std::uint16_t> n0;
    std::optional<std::uint32_t> r;
    std::optional<std::uint16_t> d_v;
    std::optional<double> sigma;
    std::optional<std::uint32_t> t_lower;
    std::optional<int> q;
    std::optional<int> max_iter;

    void attach(CLI::App* app) {
        app->add_option("--preset", preset, "Parameter preset")->check(CLI::IsMember({"80", "128"}));
        app->add_option("--n0", n0, "Number of circulant blocks (default 2)");
        app->add_option("--r", r, "Circulant size (odd)");
        app->add_option("--dv", d_v, "Private column weight");
        app->add_option("--sigma", sigma, "Noise standard deviation");
        app->add_option("--t-lower", t_lower, "Rejection bound on induced errors (default round(t_hat))");
        app->add_option("--q", q, "Ciphertext quantization bits (default 16)");
        app->add_option("--max-iter", max_iter, "Decoder iteration limit (default 100)");
    }

    smce::SystemParams build(bool allow_zero_sigma = false) const {
        smce::SystemParams p;
        if (preset == "80") p = smce::SystemParams::preset_80();
        else if (preset == "128") p = smce::SystemParams::preset_128();
        else if (!r || !d_v || !sigma) throw smce::InvalidParams("need --preset or all of --r, --dv, --sigma");
        if (n0) p.n0 = *n0;
        if (r) p.r = *r;
        if (d_v) p.d_v = *d_v;
        if (sigma) p.sigma = *sigma;
        if (q) p.q = static_cast<std::uint8_t>(*q);
        if (max_iter) p.max_iter = static_cast<std::uint16_t>(*max_iter);
        if (t_lower) p.t_lower = *t_lower;
        else if (preset.empty() || r || n0 || sigma) p.t_lower = static_cast<std::uint32_t>(std::lround(p.t_hat()));
        p.validate(allow_zero_sigma);
        return p;
    }
};

int cmd_keygen(const ParamFlags& pf, const std::string& prefix, const std::optional<std::uint64_t>& seed) {
    const auto params = pf.build();
    const auto kp = smce::generate_keypair(params, resolve_seed(seed));
    write_file(prefix + ".priv", smce::serialize_key(kp.private_key));
    write_file(prefix + ".pub", smce::serialize_key(kp.public_key));
    std::cout << "wrote " << prefix << ".priv and " << prefix << ".pub (public payload "
              << kp.public_key.payload_bits() << " bits)\n";
    return kOk;
}

int cmd_encrypt(const std::string& pub, const std::string& in, const std::string& out,
                const std::optional<std::uint64_t>& seed) {
    const auto pk = smce::deserialize_public_key(read_file(pub));
    const auto data = read_file(in);
    const auto stream = smce::encrypt_stream(data, pk, resolve_seed(seed));
    write_file(out, stream);
    std::cout << "encrypted " << stream.size() / smce::ciphertext_record_bytes(pk.params.n(), pk.params.q)
              << " block(s)\n";
    return kOk;
}

int cmd_decrypt(const std::string& priv, const std::string& in, const std::string& out) {
    const auto sk = smce::deserialize_private_key(read_file(priv));
    const auto res = smce::decrypt_stream(read_file(in), sk);
    if (!res.ok()) {
        for (auto b : res.failed_blocks)
            std::cerr << "block " << b << ": decoding failed after " << res.iterations[b] << " iterations\n";
        std::cerr << res.failed_blocks.size() << " of " << res.blocks << " block(s) failed; no output written\n";
        return kDecodeFailure;
    }
    write_file(out, *res.plaintext);
    std::cout << "decrypted " << res.blocks << " block(s)\n";
    return kOk;
}

int cmd_estimate(const ParamFlags& pf, const std::string& model, const std::string& tf_curve,
                 const std::string& kv_file, const std::optional<std::uint32_t>& attacker_dv) {
    const auto params = pf.build(true);
    const auto rep = smce::security_report(params, smce::parse_isd_model(model), attacker_dv);
    std::cout << smce::format_report(rep);
    if (!tf_curve.empty()) write_text(tf_curve, smce::format_tf_curve(rep));
    if (!kv_file.empty()) write_text(kv_file, smce::format_report_kv(rep));
    return kOk;
}

int cmd_de_threshold(std::uint32_t dv, const std::string& rate, double tol) {
    const double R = smce::parse_rate(rate);
    const auto q = smce::DeQuery::for_rate(dv, R, tol);
    const auto t = smce::de_threshold(q);
    std::printf("d_v=%u d_c=%u rate=%s sigma_t=%.6f bracket=[%.6f,%.6f] evaluations=%d\n", q.d_v, q.d_c, rate.c_str(),
                t.sigma_t, t.lower, t.upper, t.evaluations);
    return kOk;
}

int cmd_de_table(const std::string& rates, const std::string& range, std::uint32_t step, double tol,
                 const std::string& out) {
    const auto colon = range.find(':');
    if (colon == std::string::npos) throw smce::InvalidParams("--dv-range must be A:B");
    const auto a = static_cast<std::uint32_t>(std::stoul(range.substr(0, colon)));
    const auto b = static_cast<std::uint32_t>(std::stoul(range.substr(colon + 1)));
    if (a < 2 || b < a || step == 0) throw smce::InvalidParams("invalid --dv-range or --step");
    std::vector<std::string> names;
    std::stringstream ss(rates);
    for (std::string item; std::getline(ss, item, ',');) names.push_back(item);
    std::ostringstream csv;
    csv << "d_v,rate,d_c,sigma_t\n";
    for (const auto& name : names) {
        const double R = smce::parse_rate(name);
        for (std::uint32_t dv = a; dv <= b; dv += step) {
            const auto q = smce::DeQuery::for_rate(dv, R, tol);
            const auto t = smce::de_threshold(q);
            csv << dv << ',' << name << ',' << q.d_c << ',' << t.sigma_t << '\n';
            if (out.empty()) std::cout << dv << ',' << name << ',' << q.d_c << ',' << t.sigma_t << std::endl;
        }
    }
    if (!out.empty()) {
        write_text(out, csv.str());
        std::cout << csv.str();
    }
    return kOk;
}

int cmd_sim_dfr(const ParamFlags& pf, std::uint64_t trials, unsigned threads, double scale,
                const std::optional<std::uint64_t>& seed) {
    auto params = pf.build();
    if (!(scale > 0.0)) throw smce::InvalidParams("--sigma-scale must be positive");
    params.sigma *= scale;
    // The rejection floor follows the scaled noise unless given explicitly.
    if (!pf.t_lower) params.t_lower = static_cast<std::uint32_t>(std::lround(params.t_hat()));
    const auto res = smce::dfr_trial_batch(params, trials, resolve_seed(seed), threads);
    std::cout << res.summary_line(params) << '\n';
    std::cout << "attempts";
    for (auto [k, c] : res.attempts_histogram) std::cout << ' ' << k << ':' << c;
    std::cout << '\n';
    return kOk;
}

int cmd_sim_order(std::uint32_t n, double sigma, std::uint64_t trials, unsigned threads, const std::string& out,
                  const std::optional<std::uint64_t>& seed) {
    const auto st = smce::ordered_error_oracle(n, sigma, trials, resolve_seed(seed), threads);
    const auto freq = st.frequencies();
    const auto exact = smce::p_err_ordered_all(n, sigma);
    std::ostringstream csv;
    csv.precision(10);
    csv << "rank,empirical,quadrature\n";
    double sum = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
        csv << i + 1 << ',' << freq[i] << ',' << exact[i] << '\n';
        sum += freq[i];
    }
    if (out.empty()) std::cout << csv.str();
    else write_text(out, csv.str());
    std::cout << "empirical_total=" << sum << " expected_errors=" << smce::expected_errors(n, sigma) << '\n';
    return kOk;
}

int cmd_sim_flip(std::uint32_t n, double sigma, std::uint32_t tf, std::uint64_t trials,
                 const std::optional<std::uint64_t>& seed) {
    const auto demo = smce::soft_attack_demo(n, sigma, tf, trials, resolve_seed(seed));
    std::printf("n=%u sigma=%.6f t_f=%u trials=%llu successes=%llu rate=%.6g p_f=%.6g residual_ok=%llu\n", n, sigma,
                tf, static_cast<unsigned long long>(demo.trials), static_cast<unsigned long long>(demo.successes),
                demo.rate(), smce::p_flip_success(tf, n, sigma), static_cast<unsigned long long>(demo.residual_ok));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Soft-decision QC-MDPC McEliece: keys, encryption, security estimates, simulations"};
    app.require_subcommand(1);
    std::optional<std::uint64_t> seed;
    int rc = kOk;

    auto* keygen = app.add_subcommand("keygen", "Generate a key pair");
    ParamFlags kg_params;
    kg_params.attach(keygen);
    std::string prefix;
    keygen->add_option("--out-prefix", prefix, "Writes PREFIX.priv and PREFIX.pub")->required();
    keygen->add_option("--seed", seed, "RNG seed (falls back to SMCE_SEED)");
    keygen->callback([&] { rc = cmd_keygen(kg_params, prefix, seed); });

    auto* enc = app.add_subcommand("encrypt", "Encrypt a file");
    std::string pub, in, out;
    enc->add_option("--pub", pub, "Public key file")->required();
    enc->add_option("--in", in, "Plaintext file")->required();
    enc->add_option("--out", out, "Ciphertext stream file")->required();
    enc->add_option("--seed", seed, "RNG seed (falls back to SMCE_SEED)");
    enc->callback([&] { rc = cmd_encrypt(pub, in, out, seed); });

    auto* dec = app.add_subcommand("decrypt", "Decrypt a ciphertext stream");
    std::string priv;
    dec->add_option("--priv", priv, "Private key file")->required();
    dec->add_option("--in", in, "Ciphertext stream file")->required();
    dec->add_option("--out", out, "Plaintext output file")->required();
    dec->callback([&] { rc = cmd_decrypt(priv, in, out); });

    auto* est = app.add_subcommand("estimate", "Security report");
    ParamFlags est_params;
    est_params.attach(est);
    std::string model = "bjmm", tf_curve, kv_file;
    std::optional<std::uint32_t> attacker_dv;
    est->add_option("--model", model, "ISD cost model")->check(CLI::IsMember({"bjmm", "stern", "prange"}));
    est->add_option("--tf-curve", tf_curve, "Write the (t_f, WF) scan as CSV");
    est->add_option("--kv", kv_file, "Write the report as key=value lines");
    est->add_option("--attacker-dv", attacker_dv, "Column weight assumed for the DE verdict (default ceil(r/2))");
    est->callback([&] { rc = cmd_estimate(est_params, model, tf_curve, kv_file, attacker_dv); });

    auto* det = app.add_subcommand("de-threshold", "Density-evolution threshold of a regular ensemble");
    std::uint32_t dv = 3;
    std::string rate = "1/2";
    double tol = 1e-4;
    det->add_option("--dv", dv, "Column weight")->required();
    det->add_option("--rate", rate, "Code rate, e.g. 1/2")->required();
    det->add_option("--tol", tol, "Bracket width");
    det->callback([&] { rc = cmd_de_threshold(dv, rate, tol); });

    auto* detab = app.add_subcommand("de-table", "Threshold table over column weights and rates");
    std::string rates = "1/2,2/3,3/4", range;
    std::uint32_t step = 1;
    detab->add_option("--rates", rates, "Comma-separated rates");
    detab->add_option("--dv-range", range, "Column weights A:B")->required();
    detab->add_option("--step", step, "Column weight step");
    detab->add_option("--tol", tol, "Bracket width");
    detab->add_option("--out", out, "CSV output file");
    detab->callback([&] { rc = cmd_de_table(rates, range, step, tol, out); });

    auto* sim = app.add_subcommand("simulate", "Monte Carlo harnesses");
    sim->require_subcommand(1);
    std::uint64_t trials = 1000;
    unsigned threads = 1;

    auto* dfr = sim->add_subcommand("dfr", "Decryption failure rate");
    ParamFlags dfr_params;
    dfr_params.attach(dfr);
    double scale = 1.0;
    dfr->add_option("--trials", trials, "Roundtrips");
    dfr->add_option("--threads", threads, "Worker threads");
    dfr->add_option("--sigma-scale", scale, "Multiply sigma by this factor");
    dfr->add_option("--seed", seed, "RNG seed (falls back to SMCE_SEED)");
    dfr->callback([&] { rc = cmd_sim_dfr(dfr_params, trials, threads, scale, seed); });

    auto* ord = sim->add_subcommand("order-stats", "Per-rank error frequencies versus quadrature");
    std::uint32_t n = 200;
    double sigma = 0.44091;
    ord->add_option("--n", n, "Block length")->required();
    ord->add_option("--sigma", sigma, "Noise standard deviation")->required();
    ord->add_option("--trials", trials, "Blocks to simulate");
    ord->add_option("--threads", threads, "Worker threads");
    ord->add_option("--out", out, "CSV output file");
    ord->add_option("--seed", seed, "RNG seed (falls back to SMCE_SEED)");
    ord->callback([&] { rc = cmd_sim_order(n, sigma, trials, threads, out, seed); });

    auto* flip = sim->add_subcommand("flip-demo", "Success rate of flipping the least reliable bits");
    std::uint32_t tf = 0;
    flip->add_option("--n", n, "Block length (<= 500)")->required();
    flip->add_option("--sigma", sigma, "Noise standard deviation")->required();
    flip->add_option("--tf", tf, "Positions to flip")->required();
    flip->add_option("--trials", trials, "Blocks to simulate");
    flip->add_option("--seed", seed, "RNG seed (falls back to SMCE_SEED)");
    flip->callback([&] { rc = cmd_sim_flip(n, sigma, tf, trials, seed); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const smce::FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const smce::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    }
    return rc;
}
