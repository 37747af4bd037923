#include "jcond/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

bool read_file(const std::string& path, std::string& out)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"jcond: junction conditions for jump solutions of polynomial PDE systems"};
    app.require_subcommand(1, 1);

    std::string input, out_path, method = "resoluble", eps_list;
    bool latex = false, as_json = false;
    std::size_t grid = 400;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", input, "system file")->required();
        sub->add_option("--out", out_path, "write the document to PATH instead of stdout");
        sub->add_flag("--json", as_json, "JSON output (default)");
    };
    CLI::App* classify = app.add_subcommand("classify", "decide resolubility and print certificates");
    add_common(classify);
    classify->add_flag("--latex", latex, "LaTeX output");

    CLI::App* junction = app.add_subcommand("junction", "derive junction conditions");
    add_common(junction);
    junction->add_option("--method", method, "resoluble or mh")->check(CLI::IsMember({"resoluble", "mh"}));
    junction->add_flag("--latex", latex, "LaTeX output");

    CLI::App* check = app.add_subcommand("check", "numerical mollification check");
    add_common(check);
    check->add_option("--eps", eps_list, "descending widths e1,e2,...");
    check->add_option("--grid", grid, "points per axis")->check(CLI::Range(8, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : jcond::ExitInputError;
    }
    if (latex && as_json) {
        std::cerr << "error: --latex and --json are exclusive\n";
        return jcond::ExitInputError;
    }

    jcond::CliOptions opt;
    opt.latex = latex;
    opt.method = method == "mh" ? jcond::JunctionMethod::MH : jcond::JunctionMethod::Resoluble;
    opt.grid = grid;
    if (!eps_list.empty()) {
        opt.widths.clear();
        std::stringstream ss(eps_list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                opt.widths.push_back(std::stod(item, &used));
                if (used != item.size())
                    throw std::invalid_argument(item);
            } catch (const std::exception&) {
                std::cerr << "error: --eps expects comma-separated numbers, got '" << item << "'\n";
                return jcond::ExitInputError;
            }
        }
    }
    if (const char* s = std::getenv("JCOND_SEED")) {
        try {
            std::size_t used = 0;
            opt.seed = std::stoull(s, &used);
            if (used != std::string(s).size())
                throw std::invalid_argument(s);
        } catch (const std::exception&) {
            std::cerr << "error: JCOND_SEED must be a non-negative integer\n";
            return jcond::ExitInputError;
        }
    }

    std::string source;
    if (!read_file(input, source)) {
        std::cerr << "error: cannot read " << input << "\n";
        return jcond::ExitInputError;
    }

    jcond::CommandResult res;
    if (classify->parsed())
        res = jcond::cmd_classify(source, opt);
    else if (junction->parsed())
        res = jcond::cmd_junction(source, opt);
    else
        res = jcond::cmd_check(source, opt);

    std::cerr << res.diagnostics;
    if (!res.output.empty()) {
        if (out_path.empty()) {
            std::cout << res.output;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!(out << res.output)) {
                std::cerr << "error: cannot write " << out_path << "\n";
                return jcond::ExitInputError;
            }
        }
    }
    return res.exit_code;
}
