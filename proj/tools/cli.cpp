#include "cli.hpp"

#include "agm/export.hpp"
#include "agm/verify.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

namespace agm::cli {

namespace {

using nlohmann::json;

struct Config {
    unsigned threads = 0;
    std::uint64_t memory_cap = aq::BuildOptions{}.memory_cap;
    std::uint64_t max_q = aq::BuildOptions{}.max_q;
    std::uint64_t seed = 0x5eed;
    std::string field;
    std::string format;
};

aq::BuildOptions build_options(const Config& c) {
    aq::BuildOptions o;
    o.threads = c.threads;
    o.memory_cap = c.memory_cap;
    o.max_q = c.max_q;
    return o;
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_build(const Config& c, std::ostream& out) {
    ff::Field F = ff::Field::parse(c.field);
    auto t0 = std::chrono::steady_clock::now();
    aq::Aquarium A = aq::Aquarium::build(F, build_options(c));
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    if (c.format == "json") {
        print_json(out, {{"schema", io::kSchemaVersion},
                         {"field", F.spec()},
                         {"vertices", A.size()},
                         {"edges", A.graph().edge_count()},
                         {"build_ms", ms}});
    } else {
        out << "field: " << F.spec() << "\nvertices: " << A.size() << "\nedges: " << A.graph().edge_count()
            << "\nbuild_ms: " << ms << "\n";
    }
    return 0;
}

int cmd_census(const Config& c, std::ostream& out) {
    ff::Field F = ff::Field::parse(c.field);
    aq::Aquarium A = aq::Aquarium::build(F, build_options(c));
    tax::Decomposition d = tax::decompose(A.graph());
    tax::Census cs = tax::census(A, d);
    if (c.format == "json")
        print_json(out, io::census_json(cs, A));
    else
        out << io::census_text(cs, A);
    return 0;
}

struct ComponentArgs {
    std::string a, b;
    unsigned extend = 1;
    std::uint64_t cap = 2'000'000;
};

int cmd_component(const Config& c, const ComponentArgs& args, std::ostream& out) {
    ff::Field F = ff::Field::parse(c.field);
    const aq::Vertex P = aq::make_vertex(F, F.parse_element(args.a), F.parse_element(args.b));
    if (args.extend == 0) throw PreconditionError("--extend must be positive");
    json levels = json::array();
    for (unsigned k = 1; k <= args.extend; ++k) {
        if (args.extend % k != 0) continue;
        ff::Field E = k == 1 ? F : ff::Field(F.characteristic(), F.degree() * k);
        if (E.order() > c.max_q) throw BudgetError(E.spec() + " exceeds max_q");
        aq::LocalComponent lc = aq::explore_component(E, aq::lift(F, P, E), args.cap);
        json level = {{"field", E.spec()},
                      {"degree", k},
                      {"size", lc.vertices.size()},
                      {"edges", lc.graph.edge_count()},
                      {"complete", lc.complete}};
        if (lc.complete) {
            tax::Decomposition d = tax::decompose(lc.graph);
            tax::Component comp = tax::classify(lc.graph, d, 0, [&lc](aq::VertexId v) { return lc.vertices[v]; }, &E);
            level["type"] = tax::to_string(comp.type);
            json heads = json::array();
            for (const auto& h : comp.heads) heads.push_back(h.size());
            level["head_lengths"] = heads;
        } else {
            level["type"] = "unknown";
        }
        levels.push_back(level);
    }
    if (c.format == "json") {
        print_json(out, {{"schema", io::kSchemaVersion},
                         {"field", F.spec()},
                         {"vertex", io::vertex_label(F, P)},
                         {"levels", levels}});
    } else {
        for (const auto& l : levels) {
            out << "F_" << l["field"].get<std::string>() << ": " << l["type"].get<std::string>() << ", "
                << l["size"].get<std::uint64_t>() << " vertices, " << l["edges"].get<std::uint64_t>() << " edges";
            if (!l["complete"].get<bool>()) out << " (cap reached)";
            out << "\n";
        }
    }
    return 0;
}

struct VerifyArgs {
    std::string check = "all";
    std::optional<std::int64_t> s;
    std::string a, b;
    unsigned m_max = 4;
    std::uint64_t sample = 10'000;
    bool inject_fault = false;
};

int cmd_verify(const Config& c, const VerifyArgs& args, std::ostream& out) {
    ff::Field F = ff::Field::parse(c.field);
    const std::uint64_t q = F.order();
    const bool all = args.check == "all";
    const bool one_mod_four = q % 4 == 1 && F.characteristic() >= 5;

    std::optional<aq::Aquarium> A;
    std::optional<tax::Decomposition> d;
    auto aquarium = [&]() -> const aq::Aquarium& {
        if (!A) {
            A.emplace(aq::Aquarium::build(F, build_options(c)));
            if (args.inject_fault) A->perturb_edge_for_testing(0);
            d.emplace(tax::decompose(A->graph()));
        }
        return *A;
    };
    auto want = [&](const char* name) { return all || args.check == name; };

    std::vector<verify::Report> reports;
    if (want("identity") && (one_mod_four || !all)) reports.push_back(verify::check_identity(F, &aquarium()));
    if (want("ms") && (F.characteristic() >= 5 || !all)) {
        if (args.s && !all)
            reports.push_back(verify::check_M_s(F, *args.s));
        else
            for (std::int64_t s : verify::traces_in_range(q, 8)) reports.push_back(verify::check_M_s(F, s));
    }
    if (want("ns") && (one_mod_four || !all)) {
        if (args.s && !all)
            reports.push_back(verify::check_N_s(F, *args.s));
        else
            for (std::int64_t s : verify::traces_in_range(q, 16)) reports.push_back(verify::check_N_s(F, s));
    }
    if (want("multiplicity")) {
        aquarium();
        reports.push_back(verify::check_multiplicity(*A, *d));
    }
    if (want("fate")) {
        if (args.a.empty() || args.b.empty()) {
            if (!all) throw PreconditionError("fate needs --a and --b");
        } else {
            verify::FateOptions fo;
            fo.m_max = args.m_max;
            fo.max_field_order = c.max_q;
            reports.push_back(
                verify::check_fate(F, aq::make_vertex(F, F.parse_element(args.a), F.parse_element(args.b)), fo));
        }
    }
    if (want("isogeny")) reports.push_back(verify::check_isogeny_edges(aquarium(), args.sample, c.seed));
    if (want("bounds") && (q % 4 == 1 || !all)) {
        aquarium();
        reports.push_back(verify::check_bounds(*A, *d));
    }
    if (want("taxonomy")) {
        aquarium();
        reports.push_back(verify::check_taxonomy(*A, *d));
    }

    json js = json::array();
    for (const auto& r : reports) js.push_back(verify::to_json(r));
    const int code = verify::exit_code(reports);
    print_json(out, {{"schema", io::kSchemaVersion}, {"field", F.spec()}, {"exit_code", code}, {"reports", js}});
    return code;
}

struct ExportArgs {
    std::string output;
    bool color = false;
};

int cmd_export(const Config& c, const ExportArgs& args, std::ostream& out) {
    ff::Field F = ff::Field::parse(c.field);
    aq::Aquarium A = aq::Aquarium::build(F, build_options(c));
    std::ofstream file;
    if (!args.output.empty()) {
        file.open(args.output, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + args.output);
    }
    std::ostream& sink = args.output.empty() ? out : file;
    std::optional<tax::Decomposition> d;
    if (args.color) d.emplace(tax::decompose(A.graph()));
    if (c.format == "csv") {
        io::write_csv(sink, A);
    } else if (c.format == "graphml") {
        io::write_graphml(sink, A, d ? &*d : nullptr);
    } else {
        io::DotOptions o;
        o.color_by_type = d ? &*d : nullptr;
        io::write_dot(sink, A, o);
    }
    sink.flush();
    if (!sink) throw std::runtime_error("write failed");
    return 0;
}

int cmd_curve(const Config& c, const std::string& lambda, std::ostream& out) {
    ff::Field F = ff::Field::parse(c.field);
    legendre::LegendreCurve E(F, F.parse_element(lambda));
    json j = io::curve_json(E);
    if (c.format == "json") {
        print_json(out, j);
    } else {
        out << "field: " << F.spec() << "\nlambda: " << j["lambda"].get<std::string>()
            << "\nj: " << j["j"].get<std::string>() << "\norder: " << E.order() << "\ntrace: " << E.trace()
            << "\ngroup: Z/" << E.structure().n1 << " + Z/" << E.structure().n2
            << "\nsupersingular: " << (E.supersingular() ? "yes" : "no") << "\n";
        if (E.frobenius()) out << "d_K: " << E.frobenius()->d_K << "\nconductor: " << E.frobenius()->f << "\n";
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"AGM aquarium builder and checker", "agm"};
    app.require_subcommand(1);
    Config c;
    app.add_option("--threads", c.threads, "worker threads (0: all cores)");
    app.add_option("--memory-cap", c.memory_cap, "memory budget, e.g. 4GB")
        ->transform(CLI::AsSizeValue(false))
        ->envname("AGM_MEMORY_CAP");
    app.add_option("--max-q", c.max_q, "largest field order to build")->envname("AGM_MAX_Q");
    app.add_option("--seed", c.seed, "seed for sampling");

    auto field_opt = [&](CLI::App* sub) { sub->add_option("--field", c.field, "field, e.g. 13, 3^2")->required(); };
    // Each subcommand keeps its own format so defaults do not leak between them.
    std::map<CLI::App*, std::string> formats;
    auto format_opt = [&](CLI::App* sub, std::vector<std::string> allowed) {
        formats[sub] = allowed.front();
        sub->add_option("--format", formats[sub], "output format")
            ->check(CLI::IsMember(allowed))
            ->default_str(allowed.front());
    };

    CLI::App* build = app.add_subcommand("build", "build the aquarium and print its size");
    field_opt(build);
    format_opt(build, {"text", "json"});

    CLI::App* census = app.add_subcommand("census", "classify every component");
    field_opt(census);
    format_opt(census, {"text", "json"});

    ComponentArgs comp;
    CLI::App* component = app.add_subcommand("component", "the component of one vertex through a field tower");
    field_opt(component);
    component->add_option("--a", comp.a)->required();
    component->add_option("--b", comp.b)->required();
    component->add_option("--extend", comp.extend, "largest extension degree");
    component->add_option("--cap", comp.cap, "vertex cap per level");
    format_opt(component, {"text", "json"});

    VerifyArgs va;
    CLI::App* ver = app.add_subcommand("verify", "run checks and print a JSON report");
    field_opt(ver);
    ver->add_option("--check", va.check)
        ->check(CLI::IsMember(
            {"identity", "ms", "ns", "multiplicity", "fate", "isogeny", "bounds", "taxonomy", "all"}));
    ver->add_option("--s", va.s, "trace for ms and ns");
    ver->add_option("--a", va.a, "vertex for fate");
    ver->add_option("--b", va.b, "vertex for fate");
    ver->add_option("--m-max", va.m_max, "largest extension degree for fate");
    ver->add_option("--sample", va.sample, "edges sampled by the isogeny check");
    ver->add_flag("--inject-edge-fault", va.inject_fault)->group("");

    ExportArgs ea;
    CLI::App* exp = app.add_subcommand("export", "write the graph as DOT, GraphML or CSV");
    field_opt(exp);
    format_opt(exp, {"dot", "graphml", "csv"});
    exp->add_option("--output,-o", ea.output, "output file (default stdout)");
    exp->add_flag("--color", ea.color, "color nodes by component type");

    std::string lambda;
    CLI::App* curve = app.add_subcommand("curve", "invariants of one Legendre curve");
    field_opt(curve);
    curve->add_option("--lambda", lambda)->required();
    format_opt(curve, {"json", "text"});

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    for (auto& [sub, f] : formats)
        if (sub->parsed()) c.format = f;

    try {
        if (build->parsed()) return cmd_build(c, out);
        if (census->parsed()) return cmd_census(c, out);
        if (component->parsed()) return cmd_component(c, comp, out);
        if (ver->parsed()) return cmd_verify(c, va, out);
        if (exp->parsed()) return cmd_export(c, ea, out);
        if (curve->parsed()) return cmd_curve(c, lambda, out);
    } catch (const aq::StructuralViolation& e) {
        err << "structural violation: " << e.what() << "\n";
        return 1;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace agm::cli
