#include "zlab/experiments.hpp"
#include "zlab/json_io.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        auto next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

std::vector<std::int64_t> parse_ints(const std::string& csv) {
    std::vector<std::int64_t> out;
    for (double v : parse_doubles(csv)) out.push_back(static_cast<std::int64_t>(v));
    return out;
}

std::vector<std::string> parse_strings(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        auto next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(csv.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        zlab::write_text_file(out_path, j.dump(2) + "\n");
}

// Desk-scale caps for the exact search (documented in the README).
void check_freeness_caps(const zlab::Instance& inst, int u) {
    if (u < 1 || u > 6) throw std::invalid_argument("u must lie in [1,6] (desk-scale cap)");
    for (int i = 0; i < inst.k; ++i)
        if (inst.class_size(i) > 4096)
            throw std::invalid_argument("class sizes are capped at 4096 (desk-scale cap)");
}

struct FreenessArgs {
    std::string instance_path;
    int u = 2;
    std::string witness_out;
};

struct BoundsArgs {
    std::string c, n;
    double eps = 0.05;
    int u = 2;
    std::uint64_t edges = 0;
    bool dominance = false;
};

struct WitnessArgs {
    std::string instance_path, witness_path, mode = "weak", pins, out;
    std::string delta_grid, sizes;
    int budget = 500;
    std::uint64_t seed = 0;
};

struct FamilyArgs {
    std::string name, out, q_list, residues;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;
};

int run(int argc, char** argv) {
    CLI::App app{"zlab: Zarankiewicz bounds and distal-regularity witnesses"};
    app.require_subcommand(1);

    FreenessArgs fr;
    auto* freeness = app.add_subcommand("freeness", "exact K_{u,...,u} containment check");
    freeness->add_option("--instance", fr.instance_path, "instance JSON")->required();
    freeness->add_option("--u", fr.u, "per-class witness size");
    freeness->add_option("--witness-out", fr.witness_out, "write witness JSON here when found");

    BoundsArgs bo;
    auto* bounds = app.add_subcommand("bounds", "closed-form bound evaluation");
    bounds->require_subcommand(1);
    auto* beval = bounds->add_subcommand("eval", "evaluate a BoundReport");
    beval->add_option("--c", bo.c, "exponent tuple, comma separated")->required();
    beval->add_option("--n", bo.n, "class sizes, comma separated")->required();
    beval->add_option("--eps", bo.eps, "epsilon > 0");
    beval->add_option("--u", bo.u, "u for the baseline exponents");
    beval->add_option("--edges", bo.edges, "exact edge count to embed in the report");
    beval->add_flag("--dominance", bo.dominance, "include the dominance diagnostic");
    auto* bgamma = bounds->add_subcommand("gamma", "print the gamma vector");
    bgamma->add_option("--c", bo.c, "exponent tuple, comma separated")->required();

    WitnessArgs wi;
    auto* witness = app.add_subcommand("witness", "verify/refine/restrict/estimate witnesses");
    witness->require_subcommand(1);
    auto* wverify = witness->add_subcommand("verify", "check the regularity conditions");
    wverify->add_option("--instance", wi.instance_path)->required();
    wverify->add_option("--witness", wi.witness_path)->required();
    wverify->add_option("--mode", wi.mode, "weak|strong");
    auto* wrefine = witness->add_subcommand("refine", "weak -> strong refinement");
    wrefine->add_option("--instance", wi.instance_path)->required();
    wrefine->add_option("--witness", wi.witness_path)->required();
    wrefine->add_option("--out", wi.out, "write the refined witness here");
    auto* wrestrict = witness->add_subcommand("restrict", "restrict along pinned class-1 elements");
    wrestrict->add_option("--instance", wi.instance_path)->required();
    wrestrict->add_option("--witness", wi.witness_path)->required();
    wrestrict->add_option("--pins", wi.pins, "class-1 elements, comma separated")->required();
    wrestrict->add_option("--out", wi.out, "write {instance, witness} here");
    auto* westimate = witness->add_subcommand("estimate", "empirical tuple estimation");
    westimate->add_option("--instance", wi.instance_path)->required();
    westimate->add_option("--delta-grid", wi.delta_grid, "decreasing deltas, comma separated")->required();
    westimate->add_option("--sizes", wi.sizes, "per-class prefix sizes (default: full classes)");
    westimate->add_option("--budget", wi.budget, "evaluation budget per delta");
    westimate->add_option("--seed", wi.seed, "search seed");

    FamilyArgs fa;
    auto* family = app.add_subcommand("family", "deterministic relation generators");
    family->require_subcommand(1);
    auto* fgen = family->add_subcommand("gen", "emit the induced instance JSON");
    fgen->add_option("--name", fa.name, "family name")->required();
    fgen->add_option("--out", fa.out, "output path (default: stdout)");
    fgen->add_option("--seed", fa.seed, "generator seed");
    fgen->add_option("--s", fa.residues, "modular_sum residues, comma separated");
    for (const char* key : {"q", "n", "m", "p", "k", "dim", "n1", "n2", "n3", "n4"})
        fgen->add_option(std::string("--") + key, fa.params[key], "family parameter");
    auto* ftable = family->add_subcommand("table", "projective-plane incidence counts");
    ftable->add_option("--q", fa.q_list, "primes, comma separated")->required();

    std::string config_path;
    auto* experiment = app.add_subcommand("experiment", "sweeps and decomposition audits");
    experiment->require_subcommand(1);
    auto* esweep = experiment->add_subcommand("sweep", "run a sweep from a config file");
    esweep->add_option("--config", config_path, "sweep config JSON")->required();
    auto* eaudit = experiment->add_subcommand("audit", "I1/I2 decomposition audit");
    eaudit->add_option("--instance", wi.instance_path)->required();
    eaudit->add_option("--witness", wi.witness_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (freeness->parsed()) {
        const auto inst = zlab::instance_from_json(zlab::load_json_file(fr.instance_path));
        check_freeness_caps(inst, fr.u);
        const auto found = zlab::find_complete(inst, fr.u);
        if (!found) {
            std::cout << "free\n";
        } else {
            std::cout << "contains\n";
            json wj;
            wj["witness"] = found->subsets;
            std::cout << wj.dump() << "\n";
            if (!fr.witness_out.empty()) zlab::write_text_file(fr.witness_out, wj.dump(2) + "\n");
        }
        return 0;
    }

    if (bounds->parsed()) {
        const auto c = parse_doubles(bo.c);
        if (bgamma->parsed()) {
            std::cout << json(zlab::gamma_vector(c)).dump() << "\n";
            return 0;
        }
        const auto n = parse_doubles(bo.n);
        auto rep = zlab::evaluate_report(c, n, bo.eps, bo.u, bo.edges);
        json j = zlab::report_to_json(rep);
        if (bo.dominance) {
            const auto dom = zlab::dominance_report(c, n, bo.eps);
            j["dominance"] = {{"hypothesis_holds", dom.hypothesis_holds},
                              {"ratio", dom.ratio},
                              {"e_term", dom.e_term}};
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    if (witness->parsed()) {
        const auto inst = zlab::instance_from_json(zlab::load_json_file(wi.instance_path));
        if (westimate->parsed()) {
            const auto rel = zlab::relation_from_instance(inst);
            std::vector<std::size_t> sizes;
            if (wi.sizes.empty())
                for (int i = 0; i < inst.k; ++i) sizes.push_back(inst.class_size(i));
            else
                for (auto v : parse_ints(wi.sizes)) sizes.push_back(static_cast<std::size_t>(v));
            const auto grid = parse_doubles(wi.delta_grid);
            const auto est = zlab::estimate_tuple(rel, sizes, grid, wi.budget, wi.seed);
            std::cout << zlab::estimate_to_json(est).dump(2) << "\n";
            return 0;
        }
        const auto w = zlab::witness_from_json(zlab::load_json_file(wi.witness_path));
        if (wverify->parsed()) {
            if (wi.mode != "weak" && wi.mode != "strong")
                throw std::invalid_argument("mode must be weak or strong");
            const auto mode = wi.mode == "strong" ? zlab::VerifyMode::Strong : zlab::VerifyMode::Weak;
            std::cout << zlab::outcome_to_json(zlab::verify_witness(inst, w, mode)).dump(2) << "\n";
            return 0;
        }
        if (wrefine->parsed()) {
            const auto res = zlab::refine_to_strong(inst, w);
            emit(zlab::refine_to_json(res), wi.out);
            return 0;
        }
        if (wrestrict->parsed()) {
            const auto res = zlab::restrict_witness(inst, w, parse_strings(wi.pins));
            json j;
            j["instance"] = zlab::instance_to_json(res.instance);
            j["witness"] = zlab::witness_to_json(res.witness);
            emit(j, wi.out);
            return 0;
        }
    }

    if (family->parsed()) {
        if (ftable->parsed()) {
            const auto rows = zlab::extremal_incidence_counts(parse_ints(fa.q_list));
            std::cout << zlab::incidence_rows_to_json(rows).dump(2) << "\n";
            return 0;
        }
        zlab::FamilySpec spec;
        spec.name = fa.name;
        spec.seed = fa.seed;
        if (!fa.residues.empty()) spec.residues = parse_ints(fa.residues);
        for (const auto& [key, value] : fa.params)
            if (fgen->count("--" + key) > 0) spec.params[key] = value;
        const auto inst = zlab::induce_canonical(zlab::generate_family(spec));
        emit(zlab::instance_to_json(inst), fa.out);
        return 0;
    }

    if (experiment->parsed()) {
        if (esweep->parsed()) {
            const auto config = zlab::sweep_config_from_json(zlab::load_json_file(config_path));
            const auto rows = zlab::run_sweep(config);
            if (config.format == "csv") {
                const auto csv = zlab::sweep_to_csv(rows);
                if (config.out_path.empty())
                    std::cout << csv;
                else
                    zlab::write_text_file(config.out_path, csv);
            } else {
                emit(zlab::sweep_rows_to_json(rows), config.out_path);
            }
            return 0;
        }
        const auto inst = zlab::instance_from_json(zlab::load_json_file(wi.instance_path));
        const auto w = zlab::witness_from_json(zlab::load_json_file(wi.witness_path));
        std::cout << zlab::audit_to_json(zlab::audit_decomposition(inst, w)).dump(2) << "\n";
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const zlab::GenerationError& e) {
        std::cerr << "generation error: " << e.what() << "\n";
        return 3;
    } catch (const zlab::SweepConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
