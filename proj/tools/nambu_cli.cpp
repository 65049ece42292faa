// Command-line frontend: Nambu checks, dual forms, unimodularity, linear
// classification, the full linearization pipeline, holonomy trajectories,
// and the symbolic Moser-coefficient report.
//
// Exit codes: 0 verdict-true/success, 2 verdict-false (witness in report),
// 1 usage or input error.
#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nambu/holonomy.hpp"
#include "nambu/linearize.hpp"
#include "nambu/nambu.hpp"
#include "nambu/parse.hpp"
#include "nambu/report.hpp"

using namespace nambu;
using nlohmann::ordered_json;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 2;
constexpr int kExitError = 1;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit_report(ReportBuilder& rb, const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open report file: " + path);
    out << rb.finish().dump(2) << "\n";
}

// Renders a polynomial of the (f, t) symbol pair with its own names.
std::string serialize_ft(const Poly& p) {
    std::string s = serialize(p);
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s.compare(i, 2, "x1") == 0) {
            out += 'f';
            ++i;
        } else if (s.compare(i, 2, "x2") == 0) {
            out += 't';
            ++i;
        } else {
            out += s[i];
        }
    }
    return out;
}

// k is written in the symbol f (or u); rewrite to the grammar's x1.
Poly parse_k(const std::string& text) {
    std::string rewritten;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        bool prev_alnum = i > 0 && (std::isalnum(static_cast<unsigned char>(text[i - 1])));
        bool next_alnum =
            i + 1 < text.size() && std::isalnum(static_cast<unsigned char>(text[i + 1]));
        if ((c == 'f' || c == 'u') && !prev_alnum && !next_alnum)
            rewritten += "x1";
        else
            rewritten += c;
    }
    return parse_poly(rewritten, 1);
}

Signature parse_signature(const std::string& text, int expected_rank) {
    int pos = 0, neg = 0;
    char comma = 0;
    std::istringstream ss(text);
    if (!(ss >> pos >> comma >> neg) || comma != ',' || pos < 0 || neg < 0)
        throw std::runtime_error("signature must be given as l,m (e.g. 3,0)");
    if (expected_rank > 0 && pos + neg != expected_rank)
        throw std::runtime_error("signature rank " + std::to_string(pos + neg) +
                                 " does not match dimension " + std::to_string(expected_rank));
    return Signature{pos, neg};
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw std::runtime_error("empty point");
    return out;
}

ordered_json signature_json(const Signature& s) {
    return ordered_json{{"pos", s.pos}, {"neg", s.neg}};
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// ---- subcommand implementations -------------------------------------------

int run_check(int dim, const std::string& input_path, const std::string& volume,
              const std::string& report_path) {
    Timer timer;
    std::string text = read_file(input_path);
    NambuCandidate c{parse_multivector(text, dim)};
    Poly h = parse_poly(volume, dim);

    ReportBuilder rb("check");
    rb.add_input("structure", text);
    rb.add_input("volume", volume);
    rb.add_parameter("dim", dim);

    IntegrabilityVerdict v = is_nambu(c, VolumeDensity(dim, h));
    ordered_json witness;
    if (!v.integrable && v.witness) {
        ordered_json xi = ordered_json::array();
        for (int i : v.witness->xi) xi.push_back(i + 1);
        witness = ordered_json{{"xi", xi},
                               {"condition", v.witness->condition},
                               {"defect", serialize(v.witness->defect)}};
    }
    rb.add_stage("duality_integrability", v.integrable,
                 v.integrable ? "both integrability conditions hold exactly"
                              : "integrability condition failed",
                 witness);

    // Fundamental-identity sweep over all coordinate tuples.
    bool fi_ok = true;
    std::string fi_witness;
    for (const IndexTuple& tup : increasing_tuples(dim, c.order() - 1)) {
        std::vector<Poly> fs;
        for (int i : tup) fs.push_back(Poly::variable(dim, i));
        if (!fundamental_identity_residual(c, fs).is_zero()) {
            fi_ok = false;
            fi_witness = "coordinate tuple (";
            for (size_t i = 0; i < tup.size(); ++i)
                fi_witness += (i ? "," : "") + std::to_string(tup[i] + 1);
            fi_witness += ")";
            break;
        }
    }
    rb.add_stage("fundamental_identity_sweep", fi_ok,
                 fi_ok ? "residual vanishes for all coordinate tuples" : fi_witness);

    bool ok = v.integrable && fi_ok;
    rb.set_field("verdict", ok);
    rb.record_timing("total", timer.seconds());
    emit_report(rb, report_path);
    std::cout << (ok ? "Nambu: yes" : "Nambu: no") << "\n";
    return ok ? kExitTrue : kExitFalse;
}

int run_dual(int dim, const std::string& input_path, const std::string& volume,
             const std::string& output_path) {
    std::string text = read_file(input_path);
    NambuCandidate c{parse_multivector(text, dim)};
    Poly h = parse_poly(volume, dim);
    std::string out = serialize(dual_form(c, VolumeDensity(dim, h)));
    if (output_path.empty()) {
        std::cout << out << "\n";
    } else {
        std::ofstream f(output_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + output_path);
        f << out << "\n";
    }
    return kExitTrue;
}

int run_unimodular(int dim, const std::string& input_path, const std::string& volume,
                   const std::string& report_path) {
    Timer timer;
    std::string text = read_file(input_path);
    NambuCandidate c{parse_multivector(text, dim)};
    Poly h = parse_poly(volume, dim);

    UnimodularVerdict v = is_unimodular(c, h);
    ReportBuilder rb("unimodular");
    rb.add_input("structure", text);
    rb.add_input("volume", volume);
    rb.add_parameter("dim", dim);
    rb.add_stage("closedness", v.unimodular,
                 v.unimodular ? "d iota_P (h mu_std) = 0 exactly" : "nonzero defect 2-form",
                 v.unimodular ? ordered_json(nullptr) : ordered_json(serialize(v.defect)));
    rb.set_field("verdict", v.unimodular);
    rb.record_timing("total", timer.seconds());
    emit_report(rb, report_path);
    std::cout << (v.unimodular ? "unimodular: yes" : "unimodular: no") << "\n";
    return v.unimodular ? kExitTrue : kExitFalse;
}

int run_classify(int dim, const std::string& input_path, const std::string& report_path) {
    Timer timer;
    std::string text = read_file(input_path);
    NambuCandidate c{parse_multivector(text, dim)};

    ReportBuilder rb("classify");
    rb.add_input("structure", text);
    rb.add_parameter("dim", dim);

    MultiVector lp = linear_part(c);
    rb.add_stage("linear_part", true, serialize(lp));

    if (c.coorder() == 1) {
        try {
            NondegSignatureResult s = nondeg_signature(lp);
            rb.add_stage("type", true, "nondegenerate Type 1");
            rb.add_stage("signature", true,
                         "(" + std::to_string(s.signature.pos) + "," +
                             std::to_string(s.signature.neg) + ")",
                         nullptr, signature_json(s.signature));
        } catch (const std::exception& e) {
            rb.add_stage("type", false,
                         std::string("not nondegenerate Type 1: ") + e.what());
        }
    }

    if (dim == 3 && c.order() == 2) {
        try {
            StructureConstants cs = isotropy_constants(c.P);
            Algebra3Classification cl = classify_3d_algebra(cs);
            const char* label = cl.label == AlgebraClass::abelian ? "abelian"
                                : cl.label == AlgebraClass::so3   ? "so3"
                                : cl.label == AlgebraClass::sl2   ? "sl2"
                                                                  : "other";
            rb.add_stage("isotropy_algebra", true, label, nullptr,
                         ordered_json{{"killing_signature", signature_json(cl.killing_signature)}});
            std::cout << "algebra: " << label << "\n";
        } catch (const std::exception& e) {
            rb.add_stage("isotropy_algebra", false,
                         std::string("linear part is not a Lie algebra: ") + e.what());
        }
    }

    rb.set_field("verdict", true);
    rb.record_timing("total", timer.seconds());
    emit_report(rb, report_path);
    std::cout << "linear part: " << serialize(lp) << "\n";
    return kExitTrue;
}

int run_linearize(int dim, const std::string& input_path, const std::string& volume,
                  const std::string& signature, const std::string& k_text, int samples,
                  double tol, double box, const std::string& report_path) {
    Timer timer;
    ReportBuilder rb("linearize");
    rb.add_parameter("dim", dim);
    rb.add_parameter("samples", samples);
    rb.add_parameter("tol", tol);
    rb.add_parameter("box", box);

    LinearizeOptions opt;
    opt.samples = samples;
    opt.tol = tol;
    opt.box = box;
    if (!k_text.empty()) {
        opt.k = parse_k(k_text);
        rb.add_input("k", k_text);
    }

    NambuCandidate c{MultiVector(dim, dim - 1)};
    Poly h = Poly::constant(dim, Rational(1));
    if (!input_path.empty()) {
        std::string text = read_file(input_path);
        c = NambuCandidate{parse_multivector(text, dim)};
        h = parse_poly(volume, dim);
        rb.add_input("structure", text);
        rb.add_input("volume", volume);
    } else if (!signature.empty()) {
        // Normal-form mode: Pi = k(f) Pi_l with the standard volume.
        Signature sig = parse_signature(signature, dim);
        rb.add_parameter("signature", signature_json(sig));
        Poly k = opt.k ? *opt.k : Poly::constant(1, Rational(1));
        Poly kf = compose_univariate(k, signature_quadratic(dim, sig));
        c = NambuCandidate{type1_nondegenerate(dim, sig).scaled(kf)};
    } else {
        throw std::runtime_error("linearize needs either --input or --signature");
    }

    LinearizeReport rep = linearize_report(c, h, opt);
    for (const LinearizeStage& s : rep.stages) rb.add_stage(s.name, s.ok, s.detail);
    if (rep.unimodular_defect) rb.set_field("witness", serialize(*rep.unimodular_defect));
    if (rep.potential) {
        rb.set_field("signature", signature_json(rep.potential->signature));
        rb.set_field("potential", serialize(rep.potential->g));
    }
    if (rep.moser) {
        rb.set_field("r_numerator", serialize_ft(rep.moser->r.num));
        rb.set_field("r_denominator", serialize_ft(rep.moser->r.den));
        rb.set_field("flipped_denominator_solves", rep.moser->flipped_variant_solves());
    }
    if (rep.max_residual >= 0) {
        rb.set_field("max_residual", rep.max_residual);
        rb.set_field("max_jacobian_fd_error", rep.max_jacobian_fd_error);
        rb.set_field("samples_run", rep.samples_run);
        rb.set_field("box_used", rep.box_used);
    }
    rb.set_field("verdict", rep.verdict);
    rb.record_timing("total", timer.seconds());
    emit_report(rb, report_path);

    std::cout << "verdict: " << rep.verdict << "\n";
    if (rep.max_residual >= 0) std::cout << "max residual: " << rep.max_residual << "\n";
    return rep.ok ? kExitTrue : kExitFalse;
}

int run_holonomy(const std::string& start, double duration, double tol, int dim, bool linear,
                 bool flip, const std::string& csv_path, const std::string& report_path) {
    Timer timer;
    std::vector<double> x0 = parse_point(start);
    if (dim == 0) dim = static_cast<int>(x0.size());
    if (dim != static_cast<int>(x0.size()))
        throw std::runtime_error("--dim disagrees with the start point length");

    ReportBuilder rb("holonomy");
    rb.add_input("start", start);
    rb.add_parameter("dim", dim);
    rb.add_parameter("time", duration);
    rb.add_parameter("tol", tol);
    rb.add_parameter("linear_model", linear);

    CounterexampleSpec spec(dim);
    spec.flip_orientation = flip;
    TrajectoryRecord tr;
    if (linear) {
        tr = linear_model_orbit(dim, x0, duration, tol);
        spec.bump = nullptr;
    } else {
        tr = integrate_trajectory(spec, x0, duration, tol);
    }
    SpiralMetrics m = spiral_metrics(spec, tr);

    rb.add_stage("integration", true,
                 std::to_string(tr.times.size()) + " accepted steps over time " +
                     std::to_string(duration));
    rb.set_field("theta_rate", m.theta_rate);
    rb.set_field("f_monotone", m.f_monotone);
    rb.set_field("f_strictly_decreasing", m.f_strictly_decreasing);
    rb.set_field("f_ode_residual", m.f_ode_residual);
    rb.set_field("f_initial", tr.f_values.front());
    rb.set_field("f_final", tr.f_values.back());
    rb.set_field("theta_excursion", std::fabs(tr.theta.back() - tr.theta.front()));
    rb.set_field("verdict", true);
    rb.record_timing("total", timer.seconds());

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot open csv file: " + csv_path);
        write_trajectory_csv(csv, tr);
    }
    emit_report(rb, report_path);
    std::cout << "steps: " << tr.times.size() << ", f: " << tr.f_values.front() << " -> "
              << tr.f_values.back() << ", theta rate: " << m.theta_rate << "\n";
    return kExitTrue;
}

int run_verify_rt(int dim, const std::string& signature, const std::string& k_text,
                  const std::string& report_path) {
    Timer timer;
    Signature sig = signature.empty() ? Signature{dim, 0} : parse_signature(signature, dim);
    Poly k = parse_k(k_text);
    MoserSpec spec{dim, sig, k};
    MoserCoefficient rt = derive_rt(spec);

    ReportBuilder rb("verify-rt");
    rb.add_input("k", k_text);
    rb.add_parameter("dim", dim);
    rb.add_parameter("signature", signature_json(sig));
    rb.add_stage("derive", true,
                 "r = (" + serialize_ft(rt.r.num) + ") / (" + serialize_ft(rt.r.den) + ")");
    rb.add_stage("own_residual", rt.own_residual.is_zero(),
                 "cleared Moser residual of the derived coefficient");
    rb.add_stage("flipped_denominator", rt.flipped_variant_solves(),
                 "sign-flipped variant: " + serialize_ft(rt.flipped_denominator) +
                     (rt.flipped_variant_solves() ? " (zeroes the residual)"
                                                  : " (does NOT zero the residual)"));
    rb.set_field("verdict", rt.own_residual.is_zero());
    rb.record_timing("total", timer.seconds());
    emit_report(rb, report_path);

    std::cout << "r_t(f) = (" << serialize_ft(rt.r.num) << ") / (" << serialize_ft(rt.r.den) << ")\n";
    std::cout << "own residual zero: " << (rt.own_residual.is_zero() ? "yes" : "no") << "\n";
    std::cout << "sign-flipped denominator zeroes residual: "
              << (rt.flipped_variant_solves() ? "yes" : "no") << "\n";
    return kExitTrue;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact exterior calculus and Nambu structure toolkit"};
    app.require_subcommand(1);

    int dim = 0;
    std::string input_path, volume = "1", report_path, output_path, signature, k_text;
    std::string start = "1,0,0", csv_path;
    int samples = 27;
    double tol = 1e-10, box = 0.2, duration = 50.0;
    bool linear = false, flip = false;

    auto* check = app.add_subcommand("check", "Nambu decision procedure plus identity sweep");
    check->add_option("--dim", dim, "ambient dimension")->required();
    check->add_option("--input", input_path, "structure file")->required();
    check->add_option("--volume", volume, "volume density h (default 1)");
    check->add_option("--report", report_path, "write JSON report");

    auto* dual = app.add_subcommand("dual", "emit the dual form iota_P (h mu_std)");
    dual->add_option("--dim", dim)->required();
    dual->add_option("--input", input_path)->required();
    dual->add_option("--volume", volume);
    dual->add_option("--output", output_path, "write to file instead of stdout");

    auto* unim = app.add_subcommand("unimodular", "exact unimodularity check");
    unim->add_option("--dim", dim)->required();
    unim->add_option("--input", input_path)->required();
    unim->add_option("--volume", volume);
    unim->add_option("--report", report_path);

    auto* classify = app.add_subcommand("classify", "linear part, type, signature, algebra label");
    classify->add_option("--dim", dim)->required();
    classify->add_option("--input", input_path)->required();
    classify->add_option("--report", report_path);

    auto* lin = app.add_subcommand("linearize", "full linearization pipeline");
    lin->add_option("--dim", dim)->required();
    lin->add_option("--input", input_path, "structure file (else use --signature)");
    lin->add_option("--volume", volume);
    lin->add_option("--signature", signature, "normal-form mode: signature l,m of f");
    lin->add_option("--k", k_text, "univariate k(f) with k(0)=1, e.g. \"1+f\"");
    lin->add_option("--samples", samples, "pullback sample count");
    lin->add_option("--tol", tol, "ODE tolerance");
    lin->add_option("--box", box, "sample box half-width");
    lin->add_option("--report", report_path);

    auto* hol = app.add_subcommand("holonomy", "integrate the counterexample field");
    hol->add_option("--start", start, "start point, comma separated")->required();
    hol->add_option("--time", duration, "integration time");
    hol->add_option("--tol", tol, "ODE tolerance");
    hol->add_option("--dim", dim, "ambient dimension (default: start length)");
    hol->add_flag("--linear", linear, "integrate the linear model instead");
    hol->add_flag("--flip", flip, "flip the field orientation");
    hol->add_option("--csv", csv_path, "write trajectory CSV");
    hol->add_option("--report", report_path);

    auto* vrt = app.add_subcommand("verify-rt", "symbolic Moser coefficient report");
    vrt->add_option("--dim", dim)->required();
    vrt->add_option("--signature", signature, "signature l,m (default n,0)");
    vrt->add_option("--k", k_text, "univariate k(f)")->required();
    vrt->add_option("--report", report_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitError;
    }

    try {
        if (*check) return run_check(dim, input_path, volume, report_path);
        if (*dual) return run_dual(dim, input_path, volume, output_path);
        if (*unim) return run_unimodular(dim, input_path, volume, report_path);
        if (*classify) return run_classify(dim, input_path, report_path);
        if (*lin)
            return run_linearize(dim, input_path, volume, signature, k_text, samples, tol, box,
                                 report_path);
        if (*hol)
            return run_holonomy(start, duration, tol, dim, linear, flip, csv_path, report_path);
        if (*vrt) return run_verify_rt(dim, signature, k_text, report_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
