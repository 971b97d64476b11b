#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "crsf/connection.hpp"
#include "crsf/graph.hpp"
#include "crsf/laplacian.hpp"
#include "crsf/lerw.hpp"
#include "crsf/oracle.hpp"
#include "crsf/sampler.hpp"
#include "crsf/surface.hpp"

using namespace crsf;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt(cplx v) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", v.real(), v.imag());
    return buf;
}

cplx parseComplex(const std::string& s) {
    // forms: "1.5", "0.3+0.9539i", "-1i", "2-0.5i"
    if (s.empty()) throw InputError("empty complex literal");
    std::string t = s;
    bool has_i = t.back() == 'i' || t.back() == 'I';
    if (!has_i) {
        size_t used = 0;
        const double re = std::stod(t, &used);
        if (used != t.size()) throw InputError("bad complex literal: " + s);
        return {re, 0.0};
    }
    t.pop_back();
    // split into real and imaginary on the last +/- not at position 0/after e
    size_t split = std::string::npos;
    for (size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    try {
        if (split == std::string::npos) {
            const std::string im = (t.empty() || t == "+" || t == "-") ? t + "1" : t;
            return {0.0, std::stod(im)};
        }
        const double re = std::stod(t.substr(0, split));
        std::string im = t.substr(split);
        if (im == "+" || im == "-") im += "1";
        return {re, std::stod(im)};
    } catch (const std::exception&) {
        throw InputError("bad complex literal: " + s);
    }
}

std::pair<int, int> parseDims(const std::string& s) {
    const size_t x = s.find('x');
    if (x == std::string::npos) throw InputError("expected <m>x<n>: " + s);
    try {
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    } catch (const std::exception&) {
        throw InputError("expected <m>x<n>: " + s);
    }
}

struct LoadedInput {
    Graph graph;
    SurfacePreset preset;
    std::optional<LineConnection> line;
    std::optional<SL2Connection> sl2;
};

LoadedInput loadInput(const std::string& file, const std::string& preset) {
    if (!file.empty() && !preset.empty()) throw InputError("give either --file or --preset");
    LoadedInput in;
    if (!file.empty()) {
        ParsedGraphFile parsed = loadGraphFile(file);
        in.graph = std::move(parsed.graph);
        if (parsed.line_phi) in.line = LineConnection(*parsed.line_phi);
        if (parsed.sl2_phi) in.sl2 = SL2Connection(*parsed.sl2_phi);
        return in;
    }
    if (preset.empty()) throw InputError("one of --file or --preset is required");
    const size_t colon = preset.find(':');
    const std::string kind = preset.substr(0, colon == std::string::npos ? preset.size() : colon);
    const std::string arg = colon == std::string::npos ? "" : preset.substr(colon + 1);
    if (kind == "cycle") {
        PresetGraph p = buildCycle(std::stoi(arg));
        in.graph = std::move(p.graph);
        in.preset = p.preset;
    } else if (kind == "cylinder") {
        auto [m, n] = parseDims(arg);
        PresetGraph p = buildGridCylinder(m, n);
        in.graph = std::move(p.graph);
        in.preset = p.preset;
    } else if (kind == "torus") {
        auto [m, n] = parseDims(arg);
        PresetGraph p = buildTorusGrid(m, n);
        in.graph = std::move(p.graph);
        in.preset = p.preset;
    } else if (kind == "torus-ne") {
        auto [m, n] = parseDims(arg);
        PresetGraph p = buildTorusGrid(m, n, true);
        in.graph = std::move(p.graph);
        in.preset = p.preset;
    } else if (kind == "grid") {
        auto [m, n] = parseDims(arg);
        in.graph = buildPlanarGrid(m, n);
    } else if (kind == "chain") {
        PresetGraph p = buildChainOfLoops(std::stoi(arg));
        in.graph = std::move(p.graph);
        in.preset = p.preset;
    } else {
        throw InputError("unknown preset '" + kind +
                         "' (cycle:N cylinder:MxN torus:MxN torus-ne:MxN grid:RxC chain:K)");
    }
    return in;
}

int runDet(const std::string& file, const std::string& preset, const std::string& mono,
           const std::string& mono2, bool oracle, bool use_json) {
    LoadedInput in = loadInput(file, preset);
    LineConnection conn = in.line ? *in.line
                                  : windingConnection(in.graph, parseComplex(mono.empty() ? "1" : mono),
                                                      parseComplex(mono2.empty() ? "1" : mono2));
    const cplx d = in.sl2 ? qdetBundle(in.graph, *in.sl2) : detBundle(in.graph, conn);
    json out;
    out["determinant"] = {{"re", d.real()}, {"im", d.imag()}};
    std::optional<cplx> oracle_val;
    if (oracle) {
        oracle_val = in.sl2 ? sl2WeightedSum(in.graph, *in.sl2) : crsfWeightedSum(in.graph, conn);
        const double rel =
            std::abs(d - *oracle_val) / std::max(std::abs(d), 1e-300);
        out["oracle"] = {{"re", oracle_val->real()}, {"im", oracle_val->imag()}};
        out["relative_error"] = rel;
    }
    if (use_json) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << (in.sl2 ? "qdet" : "det") << ": " << fmt(d) << "\n";
        if (oracle_val) {
            std::cout << "oracle: " << fmt(*oracle_val) << "\n";
            std::cout << "relative_error: " << fmt(out["relative_error"].get<double>()) << "\n";
        }
    }
    return 0;
}

int runSample(const std::string& file, const std::string& preset, const std::string& mono,
              uint64_t seed, bool use_json) {
    LoadedInput in = loadInput(file, preset);
    LineConnection conn =
        in.line ? *in.line : windingConnection(in.graph, parseComplex(mono.empty() ? "-1" : mono));
    CrsfConfig cfg = sampleCrsf(in.graph, conn, seed);
    json out;
    out["seed"] = seed;
    out["components"] = cfg.cycles.size();
    json cycles = json::array();
    for (const auto& cyc : cfg.cycles) {
        cplx w = 1.0;
        for (Dart d : cyc) w *= conn.transport(d);
        cycles.push_back({{"length", cyc.size()}, {"monodromy_re", w.real()},
                          {"monodromy_im", w.imag()}});
    }
    out["cycles"] = cycles;
    out["edges"] = cfg.edges;
    if (use_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "seed: " << seed << "\n";
    std::cout << "components: " << cfg.cycles.size() << "\n";
    for (const auto& cyc : cfg.cycles) {
        cplx w = 1.0;
        for (Dart d : cyc) w *= conn.transport(d);
        std::cout << "cycle: length " << cyc.size() << " monodromy " << fmt(w) << "\n";
    }
    for (int e : cfg.edges) std::cout << e << "\n";
    return 0;
}

int runAnnulus(const std::string& file, const std::string& preset, bool use_json) {
    LoadedInput in = loadInput(file, preset);
    AnnulusSpectrum spec = annulusSpectrum(in.graph);
    const std::vector<double> pgf = cycleCountPgf(spec);
    json out;
    out["multipliers"] = spec.multipliers;
    out["biases"] = spec.biases;
    out["pgf"] = pgf;
    out["interp_residual"] = spec.interp_residual;
    if (pgf.size() > 1) out["single_cycle_probability"] = pgf[1];
    if (use_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "multipliers:";
    for (double l : spec.multipliers) std::cout << " " << fmt(l);
    std::cout << "\nbiases:";
    for (double b : spec.biases) std::cout << " " << fmt(b);
    std::cout << "\npgf:";
    for (double p : pgf) std::cout << " " << fmt(p);
    std::cout << "\nsingle_cycle_probability: " << fmt(pgf.size() > 1 ? pgf[1] : 0.0) << "\n";
    std::cout << "interp_residual: " << fmt(spec.interp_residual) << "\n";
    return 0;
}

int runTorus(const std::string& probability, int jmax, int lmax, bool use_json) {
    TorusSpectrum spec = torusCoefficients(jmax, lmax);
    json out;
    out["tail_bound"] = spec.tail_bound;
    out["total"] = spec.total;
    if (!probability.empty()) {
        int j, k, m;
        if (std::sscanf(probability.c_str(), "%d,%d,%d", &j, &k, &m) != 3)
            throw InputError("--probability expects j,k,m");
        out["probability"] = spec.probability(j, k, m);
    }
    json table = json::array();
    for (const auto& [key, val] : spec.c) {
        const auto& [j, k, m] = key;
        if (std::abs(val) / spec.total < 1e-6) continue;
        table.push_back({{"j", j}, {"k", k}, {"m", m}, {"c", val}});
    }
    out["table"] = table;
    if (use_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    if (out.contains("probability"))
        std::cout << "probability: " << fmt(out["probability"].get<double>()) << "\n";
    std::cout << "total: " << fmt(spec.total) << "\ntail_bound: " << fmt(spec.tail_bound) << "\n";
    for (const auto& row : table)
        std::cout << "C[" << row["j"] << "," << row["k"] << "," << row["m"]
                  << "] = " << fmt(row["c"].get<double>()) << "\n";
    return 0;
}

int runLattice(const std::string& size, bool use_json) {
    auto [m, n] = parseDims(size);
    LatticePathReport rep = latticePathPgf(m, n);
    json out;
    out["mean"] = rep.mean;
    out["variance"] = rep.variance;
    json table = json::array();
    for (const auto& [jk, c] : rep.coefficients)
        table.push_back({{"j", jk.first}, {"k", jk.second}, {"c", c}});
    out["coefficients"] = table;
    out["extraction_residual"] = rep.extraction_residual;
    if (use_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    if (m == n)
        std::cout << "mean: " << fmt(rep.mean) << "\nvariance: " << fmt(rep.variance) << "\n";
    for (const auto& [jk, c] : rep.coefficients)
        std::cout << "C[" << jk.first << "," << jk.second << "] = " << fmt(c) << "\n";
    std::cout << "extraction_residual: " << fmt(rep.extraction_residual) << "\n";
    return 0;
}

int runLerw(const std::string& grid, int z1, int z2, int face, int face2, bool use_json) {
    auto [rows, cols] = parseDims(grid);
    Graph g = buildPlanarGrid(rows, cols);
    PlanarEmbedding emb = embedFromPositions(g);
    json out;
    if (face2 < 0) {
        OneHoleResult res = leftPassageOneHole(g, emb, z1, z2, face);
        out["left_probability"] = res.probability;
        out["route_formula"] = res.route_formula;
        out["route_current"] = res.route_current;
        out["routes_gap"] = res.routes_gap;
        if (use_json) {
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        std::cout << "left_probability: " << fmt(res.probability) << "\n";
        std::cout << "route_formula: " << fmt(res.route_formula) << "\n";
        std::cout << "route_current: " << fmt(res.route_current) << "\n";
        std::cout << "routes_gap: " << fmt(res.routes_gap) << "\n";
        return 0;
    }
    TwoHoleResult res = twoHoleExtraction(g, emb, z1, z2, face, face2, 1e-3);
    out["p_ll"] = res.p_ll;
    out["p_lr"] = res.p_lr;
    out["p_rl"] = res.p_rl;
    out["p_rr"] = res.p_rr;
    out["residual"] = res.residual;
    out["condition"] = res.condition;
    if (use_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "p_ll: " << fmt(res.p_ll) << "\np_lr: " << fmt(res.p_lr)
              << "\np_rl: " << fmt(res.p_rl) << "\np_rr: " << fmt(res.p_rr) << "\n";
    std::cout << "residual: " << fmt(res.residual) << "\ncondition: " << fmt(res.condition) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cycle-rooted spanning forest analyses via the vector-bundle Laplacian"};
    app.require_subcommand(1);
    bool use_json = false;
    app.add_flag("--json", use_json, "emit JSON instead of text");

    std::string file, preset, mono, mono2;
    bool oracle = false;
    auto* det_cmd = app.add_subcommand("det", "bundle determinant (line or SL2)");
    det_cmd->add_option("--file", file, "graph file");
    det_cmd->add_option("--preset", preset, "preset graph");
    det_cmd->add_option("--mono", mono, "winding monodromy z");
    det_cmd->add_option("--mono2", mono2, "second monodromy w (torus)");
    det_cmd->add_flag("--oracle", oracle, "cross-check against exact enumeration");

    uint64_t seed = 0;
    auto* sample_cmd = app.add_subcommand("sample", "sample a CRSF from the determinantal measure");
    sample_cmd->add_option("--file", file, "graph file");
    sample_cmd->add_option("--preset", preset, "preset graph");
    sample_cmd->add_option("--mono", mono, "winding monodromy z (default -1)");
    sample_cmd->add_option("--seed", seed, "RNG seed");

    auto* annulus_cmd = app.add_subcommand("annulus", "annulus spectrum and cycle-count PGF");
    annulus_cmd->add_option("--file", file, "graph file with winding marks");
    annulus_cmd->add_option("--preset", preset, "preset graph (cylinder:MxN, chain:K)");

    std::string probability;
    int jmax = 6, lmax = 8;
    auto* torus_cmd = app.add_subcommand("torus", "torus scaling-limit cycle coefficients");
    torus_cmd->add_option("--probability", probability, "report probability for j,k,m");
    torus_cmd->add_option("--jmax", jmax, "direction truncation");
    torus_cmd->add_option("--lmax", lmax, "ell truncation");

    std::string size;
    auto* lattice_cmd = app.add_subcommand("lattice", "monotone lattice path cycle statistics");
    lattice_cmd->add_option("--size", size, "torus size MxN")->required();

    std::string grid;
    int z1 = 0, z2 = 0, face = 0, face2 = -1;
    auto* lerw_cmd = app.add_subcommand("lerw", "LERW left-passage probabilities");
    lerw_cmd->add_option("--grid", grid, "planar grid RxC")->required();
    lerw_cmd->add_option("--from", z1, "start vertex")->required();
    lerw_cmd->add_option("--to", z2, "end vertex")->required();
    lerw_cmd->add_option("--face", face, "face id")->required();
    lerw_cmd->add_option("--face2", face2, "second face id (two-hole analysis)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (det_cmd->parsed()) return runDet(file, preset, mono, mono2, oracle, use_json);
        if (sample_cmd->parsed()) return runSample(file, preset, mono, seed, use_json);
        if (annulus_cmd->parsed()) return runAnnulus(file, preset, use_json);
        if (torus_cmd->parsed()) return runTorus(probability, jmax, lmax, use_json);
        if (lattice_cmd->parsed()) return runLattice(size, use_json);
        if (lerw_cmd->parsed()) return runLerw(grid, z1, z2, face, face2, use_json);
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "input: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
