// sievemk: certified lower bounds for the k-dimensional Selberg sieve
// functional M_k, admissible tuple tooling, bounded-gap reports, and the
// desk-scale sieve identity lab.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sievemk/asymptotic.hpp"
#include "sievemk/certificate.hpp"
#include "sievemk/forms.hpp"
#include "sievemk/gaps.hpp"
#include "sievemk/sieve_lab.hpp"
#include "sievemk/tuples.hpp"

namespace {

using namespace sievemk;

std::optional<std::string> cache_dir() {
    const char* env = std::getenv("SIEVE_MK_CACHE");
    if (env == nullptr || *env == '\0') return std::nullopt;
    return std::string(env);
}

std::string default_certificate_path(unsigned long k) {
    std::string name = "mk" + std::to_string(k) + ".json";
    if (auto dir = cache_dir()) return *dir + "/" + name;
    return name;
}

// builtin:h105, an inline comma list, or a tuple file path
KTuple resolve_tuple(const std::string& spec) {
    if (spec == "builtin:h105") return builtin_h105();
    if (spec.find(',') != std::string::npos) {
        std::vector<std::int64_t> elems;
        std::string tok;
        std::istringstream in(spec);
        while (std::getline(in, tok, ',')) elems.push_back(std::stoll(tok));
        return KTuple(std::move(elems));
    }
    return read_tuple_file(spec);
}

int run_certify(unsigned long k, unsigned degree, const std::string& target_text,
                const std::string& out_path) {
    Rational target = Rational::parse(target_text);
    MkCertificate cert;
    try {
        cert = certify_mk(k, degree, target);
    } catch (const CertificationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::string path = out_path.empty() ? default_certificate_path(k) : out_path;
    write_certificate(cert, path);
    std::cout << "k=" << cert.k << " degree=" << cert.degree << " basis=" << cert.basis.size()
              << "\n"
              << "float eigenvalue hint: " << cert.float_eigenvalue_hint << "\n"
              << "exact ratio: " << cert.ratio.str() << " (~" << cert.ratio.to_double() << ")\n"
              << "target " << cert.target.str() << " -> certified\n"
              << "wrote " << path << " (hash " << certificate_hash(cert) << ")\n";
    return 0;
}

int run_verify(const std::string& path) {
    MkCertificate cert = read_certificate(path);
    bool ok = verify_certificate(cert);
    if (ok) {
        std::cout << "OK: k=" << cert.k << " degree=" << cert.degree << " ratio "
                  << cert.ratio.str() << " > target " << cert.target.str() << " (hash "
                  << certificate_hash(cert) << ")\n";
        return 0;
    }
    std::cout << "FAILED: recomputed ratio does not certify " << path << "\n";
    return 1;
}

std::optional<MkCertificate> load_headline_certificate(unsigned long k,
                                                       const std::string& override_path) {
    std::string path = override_path.empty() ? default_certificate_path(k) : override_path;
    if (!std::filesystem::exists(path)) return std::nullopt;
    return read_certificate(path);
}

int run_gaps_headline(const std::string& cert5_path, const std::string& cert105_path,
                      bool as_json) {
    std::optional<MkCertificate> cert5 = load_headline_certificate(5, cert5_path);
    std::optional<MkCertificate> cert105 = load_headline_certificate(105, cert105_path);
    HeadlineReport report =
        reproduce_headline(cert5 ? &*cert5 : nullptr, cert105 ? &*cert105 : nullptr);
    if (as_json)
        std::cout << headline_to_json(report).dump(2) << "\n";
    else
        std::cout << report.text;
    return report.complete() ? 0 : 1;
}

int run_gaps_single(const std::string& theta_text, const std::string& cert_path,
                    const std::string& tuple_spec, bool as_json) {
    Rational theta = Rational::parse(theta_text);
    MkCertificate cert = read_certificate(cert_path);
    KTuple h = resolve_tuple(tuple_spec);
    try {
        GapBound bound = gap_bound(theta, cert, h);
        if (as_json) {
            nlohmann::ordered_json j;
            j["schema"] = kSchemaTag;
            j["bounds"] = nlohmann::ordered_json::array({gap_bound_to_json(bound)});
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << render_gap_line(bound) << "\n";
        }
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << " (certificate " << cert_path << ")\n";
        return 1;
    }
    return 0;
}

int run_tuple_check(const std::string& spec) {
    KTuple h = resolve_tuple(spec);
    AdmissibilityResult res = is_admissible(h);
    if (res.admissible) {
        std::cout << "admissible k=" << h.k() << " diameter=" << h.diameter() << "\n";
    } else {
        std::cout << "NOT admissible: residues cover every class mod " << res.witness_prime
                  << " (witness p=" << res.witness_prime << ")\n";
    }
    return 0;
}

int run_tuple_gen(std::size_t k, const std::string& out_path) {
    PrimeOffsetTuple t = prime_offset_tuple(k);
    std::cerr << "prime-offset tuple, k=" << k << ", shift " << t.shift << ", diameter "
              << t.tuple.diameter() << "\n";
    if (out_path.empty())
        std::cout << tuple_to_text(t.tuple);
    else
        write_tuple_file(t.tuple, out_path);
    return 0;
}

int run_tuple_refine(const std::string& path, std::size_t k, const std::string& out_path) {
    KTuple input = read_tuple_file(path);
    std::vector<std::int64_t> refined = refine_admissible(input.elements(), k);
    KTuple out(std::move(refined));
    std::cerr << "refined " << input.k() << " -> " << out.k() << " elements (every " << k
              << "-subset admissible)\n";
    if (out_path.empty())
        std::cout << tuple_to_text(out);
    else
        write_tuple_file(out, out_path);
    return 0;
}

int run_asymptote(unsigned long k, bool as_json) {
    double bound = mk_asymptotic(k);
    double a0 = default_profile_steepness(k);
    if (as_json) {
        nlohmann::ordered_json j;
        j["schema"] = kSchemaTag;
        j["k"] = k;
        j["mk_lower_bound"] = bound;
        j["advisory_flag"] = true;
        j["default_A"] = a0;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "M_" << k << " >= " << bound << "  [advisory (float); A grid around " << a0
                  << "]\n";
    }
    return 0;
}

SymmetricPoly parse_f_terms(const std::vector<std::string>& specs) {
    if (specs.empty()) return lab::unit_poly();
    SymmetricPoly f;
    for (const std::string& s : specs) {
        // "b,c,coeff"
        auto c1 = s.find(',');
        auto c2 = s.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw error("bad --f-term '" + s + "'; expected b,c,coeff");
        unsigned b = static_cast<unsigned>(std::stoul(s.substr(0, c1)));
        unsigned c = static_cast<unsigned>(std::stoul(s.substr(c1 + 1, c2 - c1 - 1)));
        f.add_term(Rational::parse(s.substr(c2 + 1)), BasisTerm{b, c});
    }
    return f;
}

int run_simulate(const std::string& tuple_spec, std::int64_t n, std::int64_t d0,
                 double r_exponent, std::int64_t r_explicit,
                 const std::vector<std::string>& f_terms, const std::string& out_path) {
    KTuple h = resolve_tuple(tuple_spec);
    unsigned k = static_cast<unsigned>(h.k());
    SymmetricPoly f = parse_f_terms(f_terms);
    lab::SieveConfig cfg = r_explicit > 0
                               ? lab::make_config(k, std::move(h), n, d0, r_explicit, std::move(f))
                               : lab::setup(k, std::move(h), n, d0, r_exponent, std::move(f));
    auto j = lab::simulate_to_json(cfg);
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw error("cannot write " + out_path);
        out << j.dump(2) << "\n";
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified M_k lower bounds, admissible tuples, and bounded prime gaps"};
    app.require_subcommand(1);

    auto* certify = app.add_subcommand("certify", "produce an exact-rational M_k certificate");
    unsigned long certify_k = 0;
    unsigned certify_degree = 0;
    std::string certify_target, certify_out;
    certify->add_option("--k", certify_k, "tuple dimension k")->required();
    certify->add_option("--degree", certify_degree, "basis degree cap D (terms with b+2c <= D)")
        ->required();
    certify->add_option("--target", certify_target, "rational target, e.g. 4/1")->required();
    certify->add_option("--out", certify_out, "output path (default: cache or ./mk<k>.json)");

    auto* verify = app.add_subcommand("verify", "re-check a certificate with exact arithmetic");
    std::string verify_path;
    verify->add_option("certificate", verify_path, "certificate JSON file")->required();

    auto* gaps = app.add_subcommand("gaps", "derive bounded-gap statements from certificates");
    bool gaps_headline = false, gaps_json = false;
    std::string gaps_theta = "1/2", gaps_cert, gaps_tuple = "builtin:h105";
    std::string gaps_cert5, gaps_cert105;
    gaps->add_flag("--headline", gaps_headline, "reproduce the three headline bounds");
    gaps->add_flag("--json", gaps_json, "emit JSON instead of text");
    gaps->add_option("--theta", gaps_theta, "exclusive supremum of levels of distribution (p/q)");
    gaps->add_option("--cert", gaps_cert, "certificate JSON file");
    gaps->add_option("--tuple", gaps_tuple, "tuple file, inline list, or builtin:h105");
    gaps->add_option("--cert-k5", gaps_cert5, "override path of the k=5 certificate");
    gaps->add_option("--cert-k105", gaps_cert105, "override path of the k=105 certificate");

    auto* tuple = app.add_subcommand("tuple", "admissible tuple utilities");
    tuple->require_subcommand(1);
    auto* tcheck = tuple->add_subcommand("check", "admissibility verdict with witness");
    std::string tcheck_spec;
    tcheck->add_option("tuple", tcheck_spec, "tuple file, inline list, or builtin:h105")
        ->required();
    auto* tgen = tuple->add_subcommand("gen", "prime-offset tuple of size k");
    std::size_t tgen_k = 0;
    std::string tgen_out;
    tgen->add_option("--k", tgen_k, "tuple size")->required();
    tgen->add_option("--out", tgen_out, "write to file instead of stdout");
    auto* trefine = tuple->add_subcommand("refine", "remove thinnest residue classes mod p <= k");
    std::string trefine_path, trefine_out;
    std::size_t trefine_k = 0;
    trefine->add_option("tuple", trefine_path, "tuple file")->required();
    trefine->add_option("--k", trefine_k, "target subset size k")->required();
    trefine->add_option("--out", trefine_out, "write to file instead of stdout");

    auto* asym = app.add_subcommand("asymptote", "advisory large-k lower bound for M_k");
    unsigned long asym_k = 0;
    bool asym_json = false;
    asym->add_option("--k", asym_k, "tuple dimension k (>= 16)")->required();
    asym->add_flag("--json", asym_json, "emit JSON");

    auto* sim = app.add_subcommand("simulate", "run the sieve identity lab on a small window");
    std::string sim_tuple = "0,2", sim_out;
    std::int64_t sim_n = 10000, sim_d0 = 3, sim_r = 0;
    double sim_rexp = 0.27;
    std::vector<std::string> sim_fterms;
    sim->add_option("--tuple", sim_tuple, "tuple file, inline list, or builtin:h105");
    sim->add_option("--n", sim_n, "window start N; sums run over [N, 2N)");
    sim->add_option("--d0", sim_d0, "small-prime cut D0 (W = product of p <= D0)");
    sim->add_option("--r-exponent", sim_rexp, "support cut R = floor(N^x)");
    sim->add_option("--r", sim_r, "explicit support cut R (overrides --r-exponent)");
    sim->add_option("--f-term", sim_fterms, "F term as b,c,coeff (repeatable); default 0,0,1");
    sim->add_option("--out", sim_out, "write the JSON record to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*certify) return run_certify(certify_k, certify_degree, certify_target, certify_out);
        if (*verify) return run_verify(verify_path);
        if (*gaps) {
            if (gaps_headline) return run_gaps_headline(gaps_cert5, gaps_cert105, gaps_json);
            if (gaps_cert.empty()) {
                std::cerr << "error: gaps needs --headline or --cert\n";
                return 1;
            }
            return run_gaps_single(gaps_theta, gaps_cert, gaps_tuple, gaps_json);
        }
        if (*tcheck) return run_tuple_check(tcheck_spec);
        if (*tgen) return run_tuple_gen(tgen_k, tgen_out);
        if (*trefine) return run_tuple_refine(trefine_path, trefine_k, trefine_out);
        if (*asym) return run_asymptote(asym_k, asym_json);
        if (*sim)
            return run_simulate(sim_tuple, sim_n, sim_d0, sim_rexp, sim_r, sim_fterms, sim_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
