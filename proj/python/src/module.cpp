#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "smce/codec.hpp"
#include "smce/density_evolution.hpp"
#include "smce/error.hpp"
#include "smce/keys.hpp"
#include "smce/message.hpp"
#include "smce/security.hpp"
#include "smce/simulate.hpp"

namespace py = pybind11;
using namespace smce;

namespace {

std::vector<std::uint8_t> to_vec(const py::bytes& b) {
    const std::string s = b;
    return {s.begin(), s.end()};
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

py::dict report_dict(const SecurityReport& r) {
    py::dict d;
    d["model"] = std::string(to_string(r.model));
    d["t_star"] = r.t_star;
    d["wf_da_hard"] = r.wf_da_hard;
    d["wf_da_soft"] = r.wf_da_soft;
    d["t_f_opt"] = r.t_f_opt;
    d["wf_kra"] = r.wf_kra;
    d["attacker_dv"] = r.attacker_dv;
    d["de_verdict"] = r.de_verdict;
    d["claimed_security_bits"] = r.claimed_security_bits;
    d["insecure"] = r.insecure();
    py::list curve;
    for (const auto& p : r.tf_curve) curve.append(py::make_tuple(p.t_f, p.log2_pf, p.wf));
    d["tf_curve"] = curve;
    return d;
}

}  // namespace

PYBIND11_MODULE(_smce, m) {
    m.doc() = "Soft McEliece over QC-MDPC codes with Gaussian noise";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<SizeMismatch>(m, "SizeMismatch", base);
    py::register_exception<InvalidParams>(m, "InvalidParams", base);
    py::register_exception<ParameterMismatch>(m, "ParameterMismatch", base);
    py::register_exception<FormatError>(m, "FormatError", base);
    py::register_exception<RetryExhausted>(m, "RetryExhausted", base);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init(&SystemParams::make), py::arg("n0"), py::arg("r"), py::arg("d_v"), py::arg("sigma"),
             py::arg("t_lower") = py::none(), py::arg("q") = 16, py::arg("max_iter") = 100)
        .def_static("preset_80", &SystemParams::preset_80)
        .def_static("preset_128", &SystemParams::preset_128)
        .def_readonly("n0", &SystemParams::n0)
        .def_readonly("r", &SystemParams::r)
        .def_readonly("d_v", &SystemParams::d_v)
        .def_readonly("sigma", &SystemParams::sigma)
        .def_readonly("t_lower", &SystemParams::t_lower)
        .def_readonly("q", &SystemParams::q)
        .def_readonly("max_iter", &SystemParams::max_iter)
        .def_property_readonly("n", &SystemParams::n)
        .def_property_readonly("k", &SystemParams::k)
        .def_property_readonly("d_c", &SystemParams::d_c)
        .def_property_readonly("rate", &SystemParams::rate)
        .def_property_readonly("t_hat", &SystemParams::t_hat)
        .def("__eq__", [](const SystemParams& a, const SystemParams& b) { return a == b; })
        .def("__repr__", [](const SystemParams& p) {
            return "SystemParams(n0=" + std::to_string(p.n0) + ", r=" + std::to_string(p.r) +
                   ", d_v=" + std::to_string(p.d_v) + ", sigma=" + std::to_string(p.sigma) +
                   ", t_lower=" + std::to_string(p.t_lower) + ")";
        });

    py::class_<PrivateKey>(m, "PrivateKey")
        .def_readonly("params", &PrivateKey::params)
        .def("supports", [](const PrivateKey& k) {
            std::vector<std::vector<std::uint32_t>> out;
            for (const auto& h : k.h_blocks) out.push_back(h.support());
            return out;
        })
        .def("to_bytes", [](const PrivateKey& k) { return to_bytes(serialize_key(k)); })
        .def_static("from_bytes", [](const py::bytes& b) { return deserialize_private_key(to_vec(b)); })
        .def("__eq__", [](const PrivateKey& a, const PrivateKey& b) { return a == b; });

    py::class_<PublicKey>(m, "PublicKey")
        .def_readonly("params", &PublicKey::params)
        .def_property_readonly("payload_bits", &PublicKey::payload_bits)
        .def("to_bytes", [](const PublicKey& k) { return to_bytes(serialize_key(k)); })
        .def_static("from_bytes", [](const py::bytes& b) { return deserialize_public_key(to_vec(b)); })
        .def("__eq__", [](const PublicKey& a, const PublicKey& b) { return a == b; });

    py::class_<KeyPair>(m, "KeyPair")
        .def_readonly("private_key", &KeyPair::private_key)
        .def_readonly("public_key", &KeyPair::public_key);

    py::class_<Ciphertext>(m, "Ciphertext")
        .def_readonly("n0", &Ciphertext::n0)
        .def_readonly("r", &Ciphertext::r)
        .def_readonly("q", &Ciphertext::q)
        .def_readonly("sigma", &Ciphertext::sigma)
        .def_readonly("codes", &Ciphertext::codes)
        .def("samples", &dequantize_samples)
        .def("to_bytes", [](const Ciphertext& c) { return to_bytes(serialize_ciphertext(c)); })
        .def_static("from_bytes", [](const py::bytes& b) { return deserialize_ciphertext(to_vec(b)); });

    m.def("keygen", &generate_keypair, py::arg("params"), py::arg("seed"));
    m.def("derive_public", &derive_public, py::arg("private_key"));
    m.def("parity_relation_holds", &parity_relation_holds);
    m.def("encode", [](const std::vector<std::uint8_t>& u, const PublicKey& pk) { return encode(u, pk); });
    m.def(
        "encrypt", [](const std::vector<std::uint8_t>& u, const PublicKey& pk, std::uint64_t seed) {
            return encrypt(u, pk, seed);
        },
        py::arg("message"), py::arg("public_key"), py::arg("seed"));
    m.def(
        "decrypt",
        [](const Ciphertext& ct, const PrivateKey& sk) -> std::optional<Bits> {
            py::gil_scoped_release release;
            return decrypt(ct, sk).message;
        },
        py::arg("ciphertext"), py::arg("private_key"), "Message bits, or None on decoding failure.");
    m.def(
        "encrypt_bytes",
        [](const py::bytes& data, const PublicKey& pk, std::uint64_t seed) {
            return to_bytes(encrypt_stream(to_vec(data), pk, seed));
        },
        py::arg("data"), py::arg("public_key"), py::arg("seed"));
    m.def(
        "decrypt_bytes",
        [](const py::bytes& stream, const PrivateKey& sk) -> py::object {
            const auto v = to_vec(stream);
            StreamDecryption res;
            {
                py::gil_scoped_release release;
                res = decrypt_stream(v, sk);
            }
            if (!res.ok()) return py::none();
            return to_bytes(*res.plaintext);
        },
        py::arg("stream"), py::arg("private_key"), "Plaintext, or None if any block failed to decode.");

    m.def(
        "wf_isd",
        [](std::uint32_t n, std::uint32_t k, std::uint32_t w, const std::string& model) {
            return wf_isd(n, k, w, parse_isd_model(model));
        },
        py::arg("n"), py::arg("k"), py::arg("w"), py::arg("model") = "bjmm");
    m.def("p_err_ordered", &p_err_ordered, py::arg("i"), py::arg("n"), py::arg("sigma"));
    m.def("p_err_ordered_all", &p_err_ordered_all, py::arg("n"), py::arg("sigma"));
    m.def("p_flip_success", &p_flip_success, py::arg("t_f"), py::arg("n"), py::arg("sigma"));
    m.def("p_flip_success_joint", &p_flip_success_joint, py::arg("t_f"), py::arg("n"), py::arg("sigma"));
    m.def("sigma_for_expected_errors", &sigma_for_expected_errors, py::arg("n"), py::arg("t_hat"));
    m.def("expected_errors", &expected_errors, py::arg("n"), py::arg("sigma"));
    m.def(
        "security_report",
        [](const SystemParams& p, const std::string& model, std::optional<std::uint32_t> attacker_dv) {
            SecurityReport r;
            {
                py::gil_scoped_release release;
                r = security_report(p, parse_isd_model(model), attacker_dv);
            }
            return report_dict(r);
        },
        py::arg("params"), py::arg("model") = "bjmm", py::arg("attacker_dv") = py::none());

    m.def(
        "de_threshold",
        [](std::uint32_t d_v, const std::string& rate, double tol) {
            DeThreshold t;
            {
                py::gil_scoped_release release;
                t = de_threshold(DeQuery::for_rate(d_v, parse_rate(rate), tol));
            }
            return py::make_tuple(t.sigma_t, t.lower, t.upper);
        },
        py::arg("d_v"), py::arg("rate") = "1/2", py::arg("tolerance") = 1e-4,
        "(sigma_t, lower, upper) of the bisection bracket.");
    m.def(
        "de_converges",
        [](std::uint32_t d_v, std::uint32_t d_c, double sigma) {
            py::gil_scoped_release release;
            return DensityEvolution(d_v, d_c).run(sigma).converged;
        },
        py::arg("d_v"), py::arg("d_c"), py::arg("sigma"));
    m.def("check_noise_above_threshold",
          [](const SystemParams& p, std::uint32_t attacker_dv) { return check_noise_above_threshold(p, attacker_dv); });

    m.def(
        "dfr_trial_batch",
        [](const SystemParams& p, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
            DfrResult r;
            {
                py::gil_scoped_release release;
                r = dfr_trial_batch(p, trials, seed, threads);
            }
            py::dict d;
            d["trials"] = r.trials;
            d["failures"] = r.failures;
            d["miscorrections"] = r.miscorrections;
            d["mean_attempts"] = r.mean_attempts();
            d["wall_seconds"] = r.wall_seconds;
            return d;
        },
        py::arg("params"), py::arg("trials"), py::arg("seed"), py::arg("threads") = 1);
    m.def(
        "ordered_error_oracle",
        [](std::uint32_t n, double sigma, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
            py::gil_scoped_release release;
            return ordered_error_oracle(n, sigma, trials, seed, threads).frequencies();
        },
        py::arg("n"), py::arg("sigma"), py::arg("trials"), py::arg("seed"), py::arg("threads") = 1);
    m.def(
        "soft_attack_demo",
        [](std::uint32_t n, double sigma, std::uint32_t t_f, std::uint64_t trials, std::uint64_t seed) {
            const auto d = soft_attack_demo(n, sigma, t_f, trials, seed);
            return py::make_tuple(d.successes, d.residual_ok, d.rate());
        },
        py::arg("n"), py::arg("sigma"), py::arg("t_f"), py::arg("trials"), py::arg("seed"),
        "(successes, residual_ok, rate)");
}
