#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "wfr/fraisse.hpp"
#include "wfr/orders.hpp"
#include "wfr/tree.hpp"

using namespace wfr;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

fs::path scratch()
{
    static fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("wfr-cli-test-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text)
{
    auto p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

// Runs the CLI with `args`; stdin comes from `input` when given.
Run cli(const std::string& args, const std::string& input = {}, const std::string& env = {})
{
    const char* exe = std::getenv("WFR_CLI");
    REQUIRE_MESSAGE(exe, "WFR_CLI must name the wfr binary");
    std::string cmd = env + " '" + std::string(exe) + "' " + args;
    if (!input.empty())
        cmd += " < '" + write_file("stdin.json", input) + "'";
    cmd += " 2>'" + (scratch() / "stderr.txt").string() + "'";
    Run r;
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0)
        r.out.append(buf, n);
    int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string last_stderr()
{
    std::ifstream in(scratch() / "stderr.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json report(const Run& r)
{
    auto j = json::parse(r.out);
    REQUIRE(j["schema"] == "wfr-report/1");
    return j;
}

const char* amalgam_input = R"({
  "S":  {"M":[2],"nodes":[{"id":7,"parent":null,"children":[]}]},
  "T1": {"M":[2],"nodes":[{"id":10,"parent":null,"children":[11,12]},
                          {"id":11,"parent":10,"children":[]},{"id":12,"parent":10,"children":[]}]},
  "f1": {"7":10},
  "T2": {"M":[2],"nodes":[{"id":0,"parent":null,"children":[1,2]},
                          {"id":1,"parent":0,"children":[]},{"id":2,"parent":0,"children":[]}]},
  "f2": [0]
})";

} // namespace

TEST_CASE("documented examples")
{
    auto sweep = cli("monoid sweep --max-order 3 --json");
    CHECK(sweep.code == 0);
    auto s = report(sweep);
    CHECK(s["status"] == "yes");

    auto rs = cli("ramsey search --backend lo --a 2 --b 3 --colors 2");
    CHECK(rs.code == 0);
    CHECK(rs.out.find("N = 6") != std::string::npos);

    auto bv = cli("tree buildv --s 2 --y 3 --json");
    CHECK(bv.code == 0);
    auto b = report(bv);
    CHECK(b["result"]["canonical"] == LexTree::balanced({2}, 2, 3).canonical());
    CHECK(LexTree::from_json(b["result"]["tree"]) == LexTree::balanced({2}, 2, 3));
}

TEST_CASE("exit codes")
{
    CHECK(cli("monoid check -", R"({"order":2,"unit":0,"table":[[0,1],[1,1]]})").code == 0);
    CHECK(cli("monoid check -", R"({"order":2,"unit":0,"table":[[0,1],[1,0]]})").code == 1);
    CHECK(cli("milliken search --m 1 --a 2 --b 3 --n-max 6 --node-limit 10").code == 2);

    auto bad = cli("monoid check -", R"({"order":2,"unit":0,"table":[[0,1],[1,)");
    CHECK(bad.code == 3);
    CHECK(last_stderr().find("at byte") != std::string::npos);

    CHECK(cli("monoid check -", R"({"order":2,"unit":0,"table":[[0,1],[1,2]]})").code == 3);
    CHECK(cli("monoid check " + (scratch() / "missing.json").string()).code == 3);
    CHECK(cli("bogus").code == 3);
    CHECK(cli("ramsey search --backend nope --a 2 --b 3").code == 3);
    CHECK(cli("tree buildv --s 2").code == 3);
}

TEST_CASE("word monoids and orders")
{
    auto w = cli("monoid check - --json", R"({"generators":["x"],"right_zero":false})");
    CHECK(w.code == 1);
    auto wz = cli("monoid check - --element \"x 0\"", R"({"generators":["x"],"right_zero":true})");
    CHECK(wz.code == 0);

    auto rt = cli("order roundtrip - --json", R"({"kind":"linear","n":4})");
    CHECK(rt.code == 0);
    auto r = report(rt);
    CHECK(r["result"]["agrees"] == true);
    CHECK(AlmostLinearOrder::from_json(r["result"]["back"]["shape"]) == AlmostLinearOrder::lb(2));
    CHECK(TernaryStructure::from_json(r["result"]["ternary"]) == to_ternary(AlmostLinearOrder::linear(4)));

    auto cl = cli("order classify -", R"({"dom":{"kind":"lb","n":1},"cod":{"kind":"lb","n":2},"map":[0,2,3]})");
    CHECK(cl.code == 1);
    CHECK(cli("order classify -", R"({"less":[[false,true],[false,false]]})").code == 0);
    CHECK(cli("order classify -", R"({"less":[[false,true],[true,false]]})").code == 3);
}

TEST_CASE("tree commands")
{
    auto a = cli("tree amalgamate - --M 2 --json --trace", amalgam_input);
    CHECK(a.code == 0);
    auto r = report(a);
    CHECK(r["result"]["canonical"] == "((()())(()()))");
    CHECK(LexTree::from_json(r["result"]["tree"]).canonical() == r["result"]["canonical"]);
    bool named = false;
    for (auto& line : r["trace"])
        named = named || line.get<std::string>().find("case i") != std::string::npos;
    CHECK(named);

    auto text = cli("tree amalgamate - --M 2 --trace", amalgam_input);
    CHECK(text.out.find("case i") != std::string::npos);

    auto clash = cli("tree amalgamate - --M 1,2", R"({
      "S":  {"M":[1,2],"nodes":[{"id":0,"parent":null,"children":[]}]},
      "T1": {"M":[1,2],"nodes":[{"id":0,"parent":null,"children":[],"dspl":1}]}, "f1": [0],
      "T2": {"M":[1,2],"nodes":[{"id":0,"parent":null,"children":[],"dspl":2}]}, "f2": [0]})");
    CHECK(clash.code == 1);

    auto bad_tree = cli("tree amalgamate - --M 1,2", R"({
      "S":  {"M":[1,2],"nodes":[{"id":0,"parent":null,"children":[1,2,3]},{"id":1,"parent":0,"children":[]},
             {"id":2,"parent":0,"children":[]},{"id":3,"parent":0,"children":[]}]},
      "T1": {"M":[1,2],"nodes":[]}, "f1": [], "T2": {"M":[1,2],"nodes":[]}, "f2": []})");
    CHECK(bad_tree.code == 3);

    json emb_in = {{"S", LexTree::chain({1}, 2).to_json()}, {"T", LexTree::chain({1}, 4).to_json()}};
    auto e = cli("tree embeddings - --M 1 --json", emb_in.dump());
    CHECK(e.code == 0);
    CHECK(report(e)["result"]["count"] == 6);
}

TEST_CASE("reports re-verify")
{
    auto s = cli("ramsey search --backend lo --a 2 --b 3 --json");
    REQUIRE(s.code == 0);
    auto path = write_file("ramsey.json", s.out);
    CHECK(cli("ramsey verify " + path).code == 0);

    auto j = json::parse(s.out);
    auto& rejected = j["result"]["rejected"];
    REQUIRE_FALSE(rejected.empty());
    auto& col = rejected.back()["coloring"];
    for (auto& c : col)
        c = 0;
    CHECK(cli("ramsey verify " + write_file("tampered.json", j.dump())).code == 1);
}

TEST_CASE("fraisse pipeline")
{
    auto u = cli("fraisse build --category finlo --length 6 --json");
    REQUIRE(u.code == 0);
    auto v = cli("fraisse build --category finlo --length 6 --seed 3 --json");
    REQUIRE(v.code == 0);
    auto up = write_file("u.json", u.out);
    CHECK(cli("fraisse verify " + up + " --bound 3").code == 0);

    AloCategory lo(AloCategory::Family::Linear);
    auto prefix = json::parse(u.out)["result"]["prefix"];
    CHECK(SequencePrefix::from_json(lo, prefix).to_json() == prefix);

    json pair = {{"u", json::parse(u.out)}, {"v", json::parse(v.out)}};
    auto z = cli("fraisse zigzag - --steps 2 --json", pair.dump());
    CHECK(z.code == 0);
    CHECK(report(z)["result"]["identities_hold"] == true);

    auto env = cli("fraisse build --category finlo --length 3 --json", {}, "WFR_BUDGET_SIZE=2");
    REQUIRE(env.code == 0);
    CHECK(json::parse(env.out)["result"]["prefix"]["metadata"]["task_bound"] == 2);
}

TEST_CASE("reports are deterministic")
{
    for (const char* args : {"monoid sweep --max-order 3 --random 20 --seed 5 --json",
                             "milliken search --m 2 --a 1 --b 2 --n-max 5 --json",
                             "fraisse build --category tc --M 2 --length 3 --json"}) {
        auto a = cli(args), b = cli(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
    auto a = cli("tree amalgamate - --M 2 --json", amalgam_input);
    auto b = cli("tree amalgamate - --M 2 --json", amalgam_input);
    CHECK(a.out == b.out);
    auto t1 = cli("milliken search --m 2 --a 1 --b 2 --n-max 5 --threads 1 --json");
    auto t2 = cli("milliken search --m 2 --a 1 --b 2 --n-max 5 --threads 2 --json");
    CHECK(json::parse(t1.out)["result"] == json::parse(t2.out)["result"]);
}
