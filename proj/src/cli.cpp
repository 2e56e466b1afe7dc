#include "branges/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "branges/json_io.hpp"

namespace branges::cli {

using io::json;

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, data.data(), data.size());
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream s;
    for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return s.str();
}

namespace {

struct UsageError : Error {
    using Error::Error;
};

class Inputs {
public:
    json load(const std::string& path) {
        if (path.empty()) throw UsageError("missing input path");
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ParseError("cannot read '" + path + "'");
        std::ostringstream s;
        s << in.rdbuf();
        const std::string text = s.str();
        hashed_ += sha256_hex(text);
        return io::parse(text);
    }
    std::string digest() const { return sha256_hex(hashed_); }

private:
    std::string hashed_;
};

Complex parse_point(const std::string& s) {
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(in >> re)) throw ParseError("points are given as re,im");
    if (in >> comma) {
        if (comma != ',' || !(in >> im)) throw ParseError("points are given as re,im");
    }
    in >> std::ws;
    if (!in.eof()) throw ParseError("points are given as re,im");
    return {re, im};
}

FactorMode parse_mode(const std::string& s) {
    if (s == "plain") return FactorMode::Plain;
    if (s == "canonical") return FactorMode::Canonical;
    throw ParseError("mode must be plain or canonical");
}

Side parse_side(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    throw ParseError("side must be left or right");
}

struct Result {
    bool pass = true;
    json payload;
};

struct Options {
    std::string in, out, mode = "plain", side = "left", base, w, z, alpha, beta, f, g, p, e0, s, points, samples, name,
                         out_dir = ".";
    FactorOptions factor;
    GridSpec grid;
    H1Tolerances h1;
    QuadConfig quad;
    bool cross_check = false;
    bool no_polish = false;
    int sample_count = 20;
};

void add_quad(CLI::App* c, Options& o) {
    c->add_option("--quad-T0", o.quad.T0, "Initial half-width of the finite quadrature window")->capture_default_str();
    c->add_option("--quad-max-doublings", o.quad.max_doublings, "Window doublings before ConvergenceError")
        ->capture_default_str();
    c->add_option("--quad-rel-tol", o.quad.rel_tol, "Relative change between doublings accepted as converged")
        ->capture_default_str();
    c->add_option("--quad-nodes", o.quad.nodes_per_panel, "Gauss-Legendre nodes per panel")->capture_default_str();
    c->add_option("--quad-panel-tol", o.quad.panel_tol, "Panel refinement tolerance relative to the L1 mass")
        ->capture_default_str();
}

void add_factor(CLI::App* c, Options& o) {
    c->add_option("--rank-tol", o.factor.rank_tol, "Rank tolerance; negative selects n sqrt(eps) times the local scale")
        ->capture_default_str();
    c->add_option("--real-axis-tol", o.factor.real_axis_tol, "Zeros with |Im z| <= tol (1 + |z|) count as real")
        ->capture_default_str();
    c->add_option("--verify-points", o.factor.verify_points, "Size of the reconstruction grid")->capture_default_str();
    c->add_option("--verify-seed", o.factor.verify_seed, "Seed of the reconstruction grid")->capture_default_str();
    c->add_option("--cluster-radius", o.factor.zero_opts.cluster_radius,
                  "Zero merge radius; negative selects 1e-8 (1 + |z|)")
        ->capture_default_str();
}

void add_grid(CLI::App* c, Options& o) {
    c->add_option("--grid-re-points", o.grid.re_points, "Real-part samples of the half-plane grids")
        ->capture_default_str();
    c->add_option("--grid-im-points", o.grid.im_points, "Imaginary-part samples of the half-plane grids")
        ->capture_default_str();
    c->add_option("--grid-extent", o.grid.re_max, "Bound on |Re z| of the half-plane grids")->capture_default_str();
    c->add_option("--grid-real-points", o.grid.real_points, "Uniform samples of the real grid")->capture_default_str();
    c->add_option("--invertible-ratio", o.h1.invertible_ratio, "Minimum sigma ratio for invertibility")
        ->capture_default_str();
    c->add_option("--schur-slack", o.h1.schur_slack, "Allowed excess of the contraction norm over 1")
        ->capture_default_str();
    c->add_option("--inner-tol", o.h1.inner_tol, "Inner/co-inner tolerance per dimension on the real grid")
        ->capture_default_str();
    c->add_option("--identity-tol", o.h1.identity_tol, "Relative tolerance of the structural identities")
        ->capture_default_str();
    c->add_option("--kernel-tol", o.h1.kernel_tol, "Relative negative eigenvalue allowed on the kernel diagonal")
        ->capture_default_str();
    c->add_option("--pole-radius", o.h1.pole_radius, "Matching radius of the real zero sets")->capture_default_str();
    c->add_option("--range-tol", o.h1.range_tol, "Bound on the range projection mismatch at common zeros")
        ->capture_default_str();
}

std::vector<Complex> seeded_samples(int count) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<Complex> out;
    for (int k = 0; k < count; ++k) out.emplace_back(u(rng), u(rng));
    return out;
}

json jointly(const JointFactorization& jf, const H1Report& h1) {
    json j = io::to_json(jf);
    j["E0_h1"] = io::to_json(h1);
    return j;
}

Result dispatch(const std::string& verb, const Options& o, Inputs& inputs) {
    Result r;
    if (verb == "zeros") {
        ZeroOptions zo = o.factor.zero_opts;
        zo.rank_tol = o.factor.rank_tol;
        zo.polish = !o.no_polish;
        r.payload = {{"zeros", io::to_json(zeros(io::matpoly_from_json(inputs.load(o.in)), zo))}};
    } else if (verb == "factor") {
        const MatPoly a = io::matpoly_from_json(inputs.load(o.in));
        const Complex base = o.base.empty() ? choose_base_point({a}) : parse_point(o.base);
        const Factorization f = factor_global(a, base, parse_side(o.side), parse_mode(o.mode), o.factor);
        r.payload = io::to_json(f);
        r.pass = f.verification.pass;
    } else if (verb == "factor-real") {
        FactorOptions fo = o.factor;
        if (!o.base.empty()) fo.base = parse_point(o.base);
        const RealFactorization f = factor_real(io::matpoly_from_json(inputs.load(o.in)), parse_mode(o.mode), fo);
        r.payload = io::to_json(f);
        r.pass = f.fact.verification.pass && f.min_real_ratio > 1e-8;
    } else if (verb == "factor-joint") {
        FactorOptions fo = o.factor;
        if (!o.base.empty()) fo.base = parse_point(o.base);
        const JointFactorization jf = factor_joint(io::dboperator_from_json(inputs.load(o.in)), parse_mode(o.mode), fo);
        const H1Report h1 = validate_h1(jf.E0, o.grid, o.h1);
        r.payload = jointly(jf, h1);
        r.pass = jf.max_range_mismatch <= 1e-6 && jf.max_resid <= 1e-8 && h1.pass;
    } else if (verb == "verify-h1") {
        const H1Report h1 = validate_h1(io::dboperator_from_json(inputs.load(o.in)), o.grid, o.h1);
        r.payload = io::to_json(h1);
        r.pass = h1.pass;
    } else if (verb == "kernel") {
        const DBOperator e = io::dboperator_from_json(inputs.load(o.in));
        const Complex w = parse_point(o.w);
        const Complex z = parse_point(o.z);
        r.payload = {{"w", io::to_json(w)}, {"z", io::to_json(z)}, {"K", io::to_json(kernel(e, w, z))}};
    } else if (verb == "gram") {
        const DBOperator e = io::dboperator_from_json(inputs.load(o.in));
        const KernelCombo pts = io::combo_from_json(inputs.load(o.points), e);
        const Matrix g = gram(e, pts.points(), pts.vectors());
        double min_eig = 0.0;
        if (g.size() > 0) {
            min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (g + g.adjoint()), Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .minCoeff();
        }
        const double norm = spectral_norm(g);
        const double herm = g.size() > 0 ? spectral_norm(g - g.adjoint()) : 0.0;
        r.payload = {{"G", io::to_json(g)}, {"min_eigenvalue", min_eig}, {"norm", norm}, {"hermitian_resid", herm}};
        r.pass = min_eig >= -1e-8 * norm && herm <= 1e-10 * std::max(1.0, norm);
    } else if (verb == "inner") {
        const DBOperator e = io::dboperator_from_json(inputs.load(o.in));
        const KernelCombo f = io::combo_from_json(inputs.load(o.f), e);
        const KernelCombo g = io::combo_from_json(inputs.load(o.g), e);
        const InnerProductResult ip = inner_product_quadrature(f, g, o.quad, o.cross_check);
        const Complex closed = inner_product_closed_form(f, g);
        const double diff = std::abs(ip.value - closed);
        const double rel = closed == 0.0 ? diff : diff / std::abs(closed);
        r.payload = io::to_json(ip);
        r.payload["closed_form"] = io::to_json(closed);
        r.payload["relative_diff"] = rel;
        r.pass = rel <= 1e-4;
    } else if (verb == "embed-check") {
        const DBOperator e = io::dboperator_from_json(inputs.load(o.in));
        const DBOperator e0 = io::dboperator_from_json(inputs.load(o.e0));
        const MatPoly p = io::matpoly_from_json(inputs.load(o.p));
        const json sj = inputs.load(o.samples);
        if (!sj.is_array()) throw ParseError("samples must be a list of kernel combos");
        std::vector<KernelCombo> samples;
        for (const auto& s : sj) samples.push_back(io::combo_from_json(s, e0));
        const EmbedReport rep = embed_check(p, e0, e, samples, o.quad);
        r.payload = io::to_json(rep);
        r.pass = rep.pass;
    } else if (verb == "assoc-check") {
        const DBOperator e = io::dboperator_from_json(inputs.load(o.in));
        const MatPoly s = io::matpoly_from_json(inputs.load(o.s));
        const AssocReport rep = associated_check(AssociatedQuery(s, parse_point(o.alpha), e),
                                                 default_probes(HalfPlane::Upper), o.quad);
        r.payload = io::to_json(rep);
        r.pass = rep.pass;
    } else if (verb == "resolvent") {
        const DBOperator e = io::dboperator_from_json(inputs.load(o.in));
        const MatPoly s = io::matpoly_from_json(inputs.load(o.s));
        const KernelCombo f = io::combo_from_json(inputs.load(o.f), e);
        const AssociatedQuery q(s, parse_point(o.alpha), e);
        const double resid = resolvent_identity_check(q, parse_point(o.beta), f, seeded_samples(o.sample_count));
        r.payload = {{"alpha", io::to_json(q.alpha)}, {"beta", io::to_json(parse_point(o.beta))},
                     {"samples", o.sample_count}, {"residual", resid}};
        r.pass = resid <= 1e-8;
    } else if (verb == "fixtures") {
        json files = json::array();
        std::filesystem::create_directories(o.out_dir);
        for (const auto& [file, content] : io::fixture_files(o.name)) {
            const std::filesystem::path path = std::filesystem::path(o.out_dir) / file;
            std::ofstream os(path);
            if (!os) throw ParseError("cannot write '" + path.string() + "'");
            os << content.dump(2) << "\n";
            files.push_back(path.string());
        }
        r.payload = {{"fixture", o.name}, {"files", files}};
    }
    return r;
}

void emit(const json& report, const std::string& path, std::ostream& out) {
    const std::string text = report.dump(2) + "\n";
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream os(path);
    os << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Factorization of matrix entire functions and de Branges space checks", "branges"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    auto add = [&](const std::string& name, const std::string& desc) {
        CLI::App* c = app.add_subcommand(name, desc);
        c->add_option("--output", o.out, "Write the report here instead of stdout");
        return c;
    };
    auto with_in = [&](CLI::App* c, const std::string& what) {
        c->add_option("--in", o.in, what)->required();
        return c;
    };

    CLI::App* zeros_cmd = with_in(add("zeros", "Zeros of det A with multiplicities and defects"), "MatPoly JSON");
    add_factor(zeros_cmd, o);
    zeros_cmd->add_flag("--no-polish", o.no_polish, "Skip the Newton step on simple zeros");

    for (const char* verb : {"factor", "factor-real"}) {
        CLI::App* c = with_in(add(verb, std::string(verb) == "factor" ? "Global factorization A = G E"
                                                                       : "Removal of the real zeros of A"),
                              "MatPoly JSON");
        c->add_option("--mode", o.mode, "plain or canonical")->capture_default_str();
        c->add_option("--base", o.base, "Base point re,im (default: searched)");
        if (std::string(verb) == "factor") c->add_option("--side", o.side, "left or right")->capture_default_str();
        add_factor(c, o);
    }
    {
        CLI::App* c = with_in(add("factor-joint", "Joint removal of common real zeros of a de Branges pair"),
                              "DBOperator JSON");
        c->add_option("--mode", o.mode, "plain or canonical")->capture_default_str();
        c->add_option("--base", o.base, "Base point re,im (default: searched)");
        add_factor(c, o);
        add_grid(c, o);
    }
    add_grid(with_in(add("verify-h1", "Validate the de Branges hypotheses"), "DBOperator JSON"), o);
    {
        CLI::App* c = with_in(add("kernel", "Evaluate K_w(z)"), "DBOperator JSON");
        c->add_option("--w", o.w, "re,im")->required();
        c->add_option("--z", o.z, "re,im")->required();
    }
    with_in(add("gram", "Gram matrix of kernel sections"), "DBOperator JSON")
        ->add_option("--points", o.points, "Kernel combo JSON with points and vectors")
        ->required();
    {
        CLI::App* c = with_in(add("inner", "Quadrature inner product against the closed form"), "DBOperator JSON");
        c->add_option("--f", o.f, "Kernel combo JSON")->required();
        c->add_option("--g", o.g, "Kernel combo JSON")->required();
        c->add_flag("--cross-check", o.cross_check, "Also integrate with E_minus^-1 and report the discrepancy");
        add_quad(c, o);
    }
    {
        CLI::App* c = with_in(add("embed-check", "Isometry of f -> P f from B(E0) into B(E)"), "DBOperator JSON for E");
        c->add_option("--e0", o.e0, "DBOperator JSON for E0")->required();
        c->add_option("--p", o.p, "MatPoly JSON for P")->required();
        c->add_option("--samples", o.samples, "List of kernel combos over E0")->required();
        add_quad(c, o);
    }
    {
        CLI::App* c = with_in(add("assoc-check", "Sufficient condition for S to be associated"), "DBOperator JSON");
        c->add_option("--S", o.s, "MatPoly JSON for S")->required();
        c->add_option("--alpha", o.alpha, "re,im with S(alpha) invertible")->required();
        add_quad(c, o);
    }
    {
        CLI::App* c = with_in(add("resolvent", "Resolvent identity of the transforms R_S"), "DBOperator JSON");
        c->add_option("--S", o.s, "MatPoly JSON for S")->required();
        c->add_option("--f", o.f, "Kernel combo JSON")->required();
        c->add_option("--alpha", o.alpha, "re,im")->required();
        c->add_option("--beta", o.beta, "re,im")->required();
        c->add_option("--samples", o.sample_count, "Number of seeded sample points")->capture_default_str();
    }
    {
        CLI::App* c = add("fixtures", "Write the canonical fixture inputs");
        c->add_option("--name", o.name, "scalar-cayley, diag-2, joint-real-zero or nilpotent-jordan")->required();
        c->add_option("--out-dir", o.out_dir, "Directory for the files")->capture_default_str();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    std::string verb;
    for (const CLI::App* c : app.get_subcommands()) verb = c->get_name();

    Inputs inputs;
    const auto start = std::chrono::steady_clock::now();
    json report = {{"verb", verb}, {"tool_version", kToolVersion}};
    int code = kPass;
    try {
        o.quad.validate();
        const Result r = dispatch(verb, o, inputs);
        report["status"] = r.pass ? "pass" : "fail";
        report["payload"] = r.payload;
        code = r.pass ? kPass : kFail;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const UnknownFixtureError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        err << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << "\n";
        report["status"] = "error";
        report["payload"] = {{"error", e.what()}};
        code = kNumerical;
    }
    const auto stop = std::chrono::steady_clock::now();
    report["timing_ms"] = std::chrono::duration<double, std::milli>(stop - start).count();
    report["input_digest"] = inputs.digest();
    emit(report, o.out, out);
    return code;
}

}  // namespace branges::cli
