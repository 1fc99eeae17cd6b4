#include <zpmact/json_io.hpp>
#include <zpmact/selfcheck.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using zpmact::ordered_json;

std::vector<zpmact::FpVec> parse_multiset_arg(const std::string& arg,
                                              zpmact::u32 p, std::size_t m) {
    std::string text;
    std::string origin;
    std::string trimmed = arg;
    std::string::size_type b = trimmed.find_first_not_of(" \t");
    if (b != std::string::npos && trimmed[b] == '[') {
        text = trimmed;
        origin = "--multiset";
    } else {
        std::ifstream in(arg);
        if (!in)
            throw zpmact::error("cannot open multiset file: " + arg);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
        origin = arg;
    }
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw zpmact::error(origin + ": " + e.what());
    }
    if (!j.is_array())
        throw zpmact::error(origin + ": multiset must be an array of vectors");
    std::vector<zpmact::FpVec> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& row = j.at(i);
        std::string where = "multiset[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != m)
            throw zpmact::error(where + " must be an array of length m = " +
                                std::to_string(m));
        zpmact::FpVec v;
        for (const auto& x : row) {
            if (!x.is_number_unsigned() || x.template get<zpmact::u64>() >= p)
                throw zpmact::error(where + " entries must be residues in [0, " +
                                    std::to_string(p) + ")");
            v.push_back(x.template get<zpmact::u32>());
        }
        out.push_back(std::move(v));
    }
    return out;
}

ordered_json weak_table(zpmact::u32 p, std::size_t m, std::size_t g,
                        std::size_t r_max, const zpmact::Limits& lim) {
    ordered_json t;
    t["p"] = p;
    t["m"] = m;
    t["g"] = g;
    t["r_max"] = r_max;
    ordered_json rows = ordered_json::array();
    std::vector<zpmact::WeakInvariant> classes =
        zpmact::enumerate_weak_classes(p, m, g, r_max, lim);
    for (const auto& wi : classes)
        rows.push_back(zpmact::weak_invariant_to_json(wi));
    t["count"] = classes.size();
    t["classes"] = std::move(rows);
    return t;
}

void print_table_text(const ordered_json& t, bool count_only,
                      std::ostream& os) {
    os << "# p=" << t["p"] << " m=" << t["m"] << " g=" << t["g"]
       << " r_max=" << t["r_max"] << "\n";
    if (count_only) {
        os << t["count"] << "\n";
        return;
    }
    os << "k g n r multiset\n";
    for (const auto& row : t["classes"])
        os << row["k"] << " " << row["g"] << " " << row["n"] << " "
           << row["r"] << " " << row["multiset"].dump() << "\n";
    os << "count: " << t["count"] << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"exact classifier for (Z/p)^m actions on closed oriented "
                 "surfaces"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path,
                   "limits file (keys: max_group_order, max_candidates, "
                   "max_sheets)");

    auto* classify = app.add_subcommand(
        "classify", "compute invariants and total genus of an action file");
    std::string classify_input, classify_format = "text";
    classify->add_option("--input", classify_input, "ActionData JSON file")
        ->required();
    classify->add_option("--format", classify_format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));

    auto* equiv = app.add_subcommand(
        "equiv", "decide equivalence of two action files");
    std::string equiv_a, equiv_b, equiv_mode = "strong";
    equiv->add_option("--a", equiv_a, "first ActionData file")->required();
    equiv->add_option("--b", equiv_b, "second ActionData file")->required();
    equiv->add_option("--mode", equiv_mode, "strong or weak")
        ->check(CLI::IsMember({"strong", "weak"}));

    auto* construct = app.add_subcommand(
        "construct", "build a witness action from invariants");
    zpmact::u64 c_p = 0, c_m = 0, c_k = 0, c_g = 0;
    std::string c_multiset = "[]", c_output;
    construct->add_option("--p", c_p, "prime")->required();
    construct->add_option("--m", c_m, "rank of the group (Z/p)^m")->required();
    construct->add_option("--k", c_k, "radical dimension")->required();
    construct->add_option("--g", c_g, "quotient genus")->required();
    construct->add_option("--multiset", c_multiset,
                          "branch multiset: inline JSON array or a file path");
    construct->add_option("--output", c_output, "write ActionData here "
                                                "(default: stdout)");

    auto* enumerate = app.add_subcommand(
        "enumerate", "list weak classes (components of the moduli space)");
    zpmact::u64 e_p = 2, e_m = 0, e_g = 0, e_g_max = 0, e_r_max = 0;
    bool e_count_only = false;
    std::string e_format = "text";
    enumerate->add_option("--p", e_p, "prime (default 2)");
    enumerate->add_option("--m", e_m, "rank of the group")->required();
    auto* g_opt = enumerate->add_option("--g", e_g, "quotient genus");
    g_opt->required();
    auto* g_max_opt =
        enumerate->add_option("--g-max", e_g_max, "end of genus range");
    enumerate->add_option("--r-max", e_r_max, "largest branch count");
    enumerate->add_flag("--count-only", e_count_only,
                        "print only the class count");
    enumerate->add_option("--format", e_format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));

    auto* selfcheck = app.add_subcommand(
        "selfcheck", "run the built-in verification suites");
    std::string sc_level = "quick";
    selfcheck->add_option("--level", sc_level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e); // prints help or the usage error
        return rc == 0 ? 0 : 2;
    }

    zpmact::Limits lim;
    if (!config_path.empty())
        lim = zpmact::load_limits(config_path);

    if (classify->parsed()) {
        zpmact::ActionData a = zpmact::load_action(classify_input);
        ordered_json report = zpmact::classify_report(a);
        if (classify_format == "json")
            std::cout << report.dump(2) << "\n";
        else
            zpmact::render_text(report, std::cout);
        return 0;
    }

    if (equiv->parsed()) {
        zpmact::ActionData a = zpmact::load_action(equiv_a);
        zpmact::ActionData b = zpmact::load_action(equiv_b);
        if (a.p != b.p || a.m != b.m)
            throw zpmact::error("cannot compare actions with different (p, m)");
        ordered_json ja, jb;
        if (equiv_mode == "strong") {
            ja = zpmact::strong_invariant_to_json(zpmact::strong_invariant(a));
            jb = zpmact::strong_invariant_to_json(zpmact::strong_invariant(b));
        } else {
            ja = zpmact::weak_invariant_to_json(zpmact::weak_invariant(a));
            jb = zpmact::weak_invariant_to_json(zpmact::weak_invariant(b));
        }
        std::string differs;
        for (auto it = ja.begin(); it != ja.end() && differs.empty(); ++it)
            if (jb.at(it.key()) != it.value())
                differs = it.key();
        if (differs.empty())
            std::cout << "EQUIVALENT\n";
        else
            std::cout << "INEQUIVALENT (" << differs << " differs)\n";
        return 0;
    }

    if (construct->parsed()) {
        if (c_p < 2 || c_p >= zpmact::max_modulus)
            throw zpmact::error("field p out of range [2, 2^15)");
        zpmact::check_prime(static_cast<zpmact::u32>(c_p));
        std::vector<zpmact::FpVec> c = parse_multiset_arg(
            c_multiset, static_cast<zpmact::u32>(c_p),
            static_cast<std::size_t>(c_m));
        zpmact::ActionData a = zpmact::construct_action(
            static_cast<zpmact::u32>(c_p), static_cast<std::size_t>(c_m),
            static_cast<std::size_t>(c_k), static_cast<std::size_t>(c_g), c);
        std::string payload = zpmact::action_to_json(a).dump(2) + "\n";
        if (c_output.empty()) {
            std::cout << payload;
        } else {
            std::ofstream out(c_output);
            if (!out)
                throw zpmact::error("cannot write output file: " + c_output);
            out << payload;
            std::cout << "wrote " << c_output << "\n";
        }
        return 0;
    }

    if (enumerate->parsed()) {
        if (e_p < 2 || e_p >= zpmact::max_modulus)
            throw zpmact::error("field p out of range [2, 2^15)");
        zpmact::check_prime(static_cast<zpmact::u32>(e_p));
        std::size_t g_lo = static_cast<std::size_t>(e_g);
        std::size_t g_hi = g_max_opt->count()
                               ? static_cast<std::size_t>(e_g_max)
                               : g_lo;
        if (g_hi < g_lo)
            throw zpmact::error("--g-max must be at least --g");
        std::vector<ordered_json> tables;
        for (std::size_t g = g_lo; g <= g_hi; ++g)
            tables.push_back(weak_table(static_cast<zpmact::u32>(e_p),
                                        static_cast<std::size_t>(e_m), g,
                                        static_cast<std::size_t>(e_r_max),
                                        lim));
        if (e_format == "json") {
            if (tables.size() == 1) {
                std::cout << tables.front().dump(2) << "\n";
            } else {
                ordered_json out;
                out["tables"] = tables;
                std::cout << out.dump(2) << "\n";
            }
        } else {
            for (const auto& t : tables) {
                if (e_count_only && tables.size() == 1)
                    std::cout << t["count"] << "\n";
                else
                    print_table_text(t, e_count_only, std::cout);
            }
        }
        return 0;
    }

    if (selfcheck->parsed()) {
        bool ok = zpmact::run_selfcheck(sc_level == "full", lim, std::cout);
        return ok ? 0 : 1;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const zpmact::guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
