#include "support.hpp"

#include "jcond/cli.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

using namespace jtest;
using nlohmann::json;

namespace {

json doc_of(const CommandResult& r) { return json::parse(r.output); }

std::string data_path(const std::string& name) { return std::string(JCOND_TEST_DATA) + "/" + name; }

int run(const std::string& args)
{
    const std::string cmd = std::string(JCOND_BINARY) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("classify documents")
{
    const CommandResult ok = cmd_classify(read_data("burgers.jc"));
    CHECK(ok.exit_code == ExitOk);
    const json d = doc_of(ok);
    CHECK(d["schema"] == kSchema);
    CHECK(d["verdicts"][0]["verdict"] == "resoluble");
    CHECK(d["certificates"].size() == 1);
    CHECK_FALSE(d.contains("report"));
    CHECK_FALSE(d.contains("conditions"));

    const CommandResult bad = cmd_classify(read_data("ux_squared.jc"));
    CHECK(bad.exit_code == ExitNegative);
    const json b = doc_of(bad);
    CHECK(b["verdicts"][0]["verdict"] == "not-resoluble");
    CHECK(b["verdicts"][0]["witness"]["monomial"] == "D[2]omega^2");
    CHECK(b["verdicts"][0]["witness"]["latex"] == "\\omega_x^2");
    CHECK(b["certificates"].empty());

    CHECK(cmd_classify(read_data("malformed.jc")).exit_code == ExitInputError);
    CHECK(cmd_classify(read_data("malformed.jc")).diagnostics.find("missing right-hand side") != std::string::npos);
}

TEST_CASE("junction documents")
{
    const CommandResult r = cmd_junction(read_data("burgers.jc"));
    CHECK(r.exit_code == ExitOk);
    const json d = doc_of(r);
    const json& c0 = d["conditions"][0];
    CHECK(c0["atom"] == "delta");
    CHECK(c0["order"] == 0);
    CHECK(c0["beta"] == 1); // equations are numbered from 1 in documents
    CHECK(c0["coefficient"] == "(up_u - um_u)*D[1]gamma + 1/2*(up_u^2 - um_u^2)*D[2]gamma");
    CHECK(c0["status"] == "constraint");
    CHECK(c0["locus"] == "on Gamma");
    CHECK(d["conditions"][1]["atom"] == "heaviside");
    CHECK(d["conditions"][1]["status"] == "satisfied-by-hypothesis");
    CHECK(d["conditions"][1]["locus"] == "near Gamma");
    CHECK_FALSE(d.contains("report"));

    CliOptions tex;
    tex.latex = true;
    const CommandResult l = cmd_junction(read_data("burgers.jc"), tex);
    CHECK(l.output.find("(u^+ - u^-)\\,\\gamma_t + \\tfrac{1}{2}((u^+)^2 - (u^-)^2)\\,\\gamma_x") != std::string::npos);
    CHECK(l.output.find("\\begin{align*}") != std::string::npos);
    CHECK(l.output.find("satisfied by hypothesis") != std::string::npos);
}

TEST_CASE("junction exit codes")
{
    CliOptions mh;
    mh.method = JunctionMethod::MH;
    CHECK(cmd_junction(read_data("burgers.jc"), mh).exit_code == ExitNoMHCertificate);
    CHECK(cmd_junction(read_data("burgers_mh.jc"), mh).exit_code == ExitOk);
    CHECK(cmd_junction(read_data("ux_squared.jc")).exit_code == ExitNegative);
    CHECK(cmd_junction(read_data("malformed.jc")).exit_code == ExitInputError);
    // both methods produce the same conditions
    CHECK(doc_of(cmd_junction(read_data("toy_mhd.jc"), mh))["conditions"] ==
          doc_of(cmd_junction(read_data("toy_mhd.jc")))["conditions"]);
}

TEST_CASE("an empty condition set is an empty array")
{
    const PDESystem sys = load("burgers.jc");
    const JunctionConditionSet none =
        derive_junction_conditions(sys, resoluble_decompose(sys).certificate(), TraceBinding::no_jump());
    REQUIRE(none.empty());
    json doc{{"conditions", conditions_json(sys, none)}};
    CHECK(render_json(doc) == "{\n  \"conditions\": []\n}\n");
}

TEST_CASE("output is byte-stable")
{
    for (const char* f : {"burgers.jc", "toy_mhd.jc", "heat.jc", "u_uxx.jc"}) {
        CAPTURE(f);
        CHECK(cmd_junction(read_data(f)).output == cmd_junction(read_data(f)).output);
        CHECK(cmd_classify(read_data(f)).output == cmd_classify(read_data(f)).output);
    }
    const std::string a = cmd_check(read_data("burgers_s06.jc")).output;
    CHECK(a == cmd_check(read_data("burgers_s06.jc")).output);
    CHECK(render_json(json::parse(a)) == a);
}

TEST_CASE("check documents and exit codes")
{
    const CommandResult ok = cmd_check(read_data("burgers_s05.jc"));
    CHECK(ok.exit_code == ExitOk);
    const json d = doc_of(ok);
    CHECK(d["report"]["verdict"] == "consistent");
    CHECK(d["report"]["seed"] == 1);
    CHECK(d["report"]["runs"].size() == 3);
    CHECK(d["report"]["test_functions"].size() == 7);
    CHECK(d["report"]["symbolic"]["conditions_hold"] == true);
    CHECK_FALSE(ok.diagnostics.empty()); // residual table

    const CommandResult bad = cmd_check(read_data("burgers_s06.jc"));
    CHECK(bad.exit_code == ExitNegative);
    CHECK(doc_of(bad)["report"]["verdict"] == "violated");
    CHECK(doc_of(bad)["report"]["symbolic"]["conditions_hold"] == false);

    CHECK(cmd_check(read_data("burgers_notrace.jc")).exit_code == ExitInputError);
    CHECK(cmd_check(read_data("burgers.jc")).exit_code == ExitInputError); // symbolic gamma
    CliOptions coarse;
    coarse.grid = 16;
    CHECK(cmd_check(read_data("burgers_s05.jc"), coarse).exit_code == ExitInputError);

    CliOptions seeded;
    seeded.seed = 5;
    CHECK(doc_of(cmd_check(read_data("burgers_s05.jc"), seeded))["report"]["seed"] == 5);
}

TEST_CASE("command-line binary")
{
    CHECK(run("classify " + data_path("burgers.jc")) == 0);
    CHECK(run("classify " + data_path("ux_squared.jc")) == 2);
    CHECK(run("junction --method mh " + data_path("burgers.jc")) == 3);
    CHECK(run("junction --method mh " + data_path("burgers_mh.jc")) == 0);
    CHECK(run("junction --method bogus " + data_path("burgers.jc")) == 1);
    CHECK(run("classify " + data_path("does_not_exist.jc")) == 1);
    CHECK(run("check " + data_path("burgers_s06.jc")) == 2);
    CHECK(run("check --eps 0.1,0.05,oops " + data_path("burgers_s05.jc")) == 1);
    CHECK(run("") == 1);

    const auto out = std::filesystem::temp_directory_path() / "jcond_cli_test.json";
    std::filesystem::remove(out);
    CHECK(run("junction --out " + out.string() + " " + data_path("burgers.jc")) == 0);
    std::ifstream in(out);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == cmd_junction(read_data("burgers.jc")).output);
    std::filesystem::remove(out);

    CHECK(std::system(("JCOND_SEED=3 " + std::string(JCOND_BINARY) + " check " + data_path("burgers_s05.jc") +
                       " >/dev/null 2>&1")
                          .c_str()) == 0);
    CHECK(run("check " + data_path("burgers_s05.jc") + " --grid 4") == 1);
}
