#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "sqm/io.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SQM_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_file(const std::string& name, const std::string& body) {
    const auto path = std::string(SQM_TMP_DIR) + "/" + name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("check") {
    const auto sq = temp_file("sq.json", R"({"kind":"serial_quota","q":[1,2],"p":[0,1],"class":"lex"})");
    const auto ok = run("--no-timestamp check --mech " + sq);
    CHECK(ok.code == 0);
    const auto j = sqm::io::parse(ok.out);
    CHECK(j["reports"].size() == 3);
    CHECK(j["passed"] == true);

    const auto bossy = run(R"(check --mech '{"kind":"counter_bossy","n":3,"m":3}' --axioms nonbossy)");
    CHECK(bossy.code == 1);
    CHECK(bossy.out.find("\"deviation\"") != std::string::npos);

    const auto overflow = run(R"(check --mech '{"kind":"serial_quota","q":[2,2],"m":3}')");
    CHECK(overflow.code == 2);
    CHECK(overflow.out.find("QuotaOverflow") != std::string::npos);

    CHECK(run("check --mech /nonexistent.json").code == 2);
    CHECK(run(R"(check --mech '{"kind":"serial_quota","q":[1]}' --axioms flying)").code == 2);
}

TEST_CASE("verify") {
    CHECK(run("verify --n 2 --m 2 --mode exhaustive").code == 0);
    const auto mut = run("--no-timestamp verify --n 2 --m 3 --mode mutate --trials 50");
    CHECK(mut.code == 0);
    CHECK(run("verify --n 2 --m 3 --mode exhaustive").code == 2);
}

TEST_CASE("fairness") {
    CHECK(run("fairness mms --q 1,3 --family identical").code == 0);
    CHECK(run("fairness ef1 --q 1,1,2 --count 200").code == 0);
    CHECK(run("fairness ef1 --q 2,1 --count 200").code == 1);
    const auto inst = temp_file("inst.json", R"({"valuations":[[11,"1001/100",10],[10,"101/100",1]]})");
    CHECK(run("fairness ef1 --q 1,2 --instance " + inst).code == 0);
    CHECK(run("fairness mms --q 1,1 --m 1").code == 2);
}

TEST_CASE("reports are byte-identical without timestamps") {
    const auto a = run("--no-timestamp fairness mms --q 1,2 --count 100 --seed 3");
    const auto b = run("--no-timestamp --threads 1 fairness mms --q 1,2 --count 100 --seed 3");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("generated_at") == std::string::npos);

    const auto out = std::string(SQM_TMP_DIR) + "/report.json";
    CHECK(run("--no-timestamp -o " + out + " verify --n 2 --m 2").code == 0);
    std::ifstream in(out);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(sqm::io::parse(text)["report"]["verdict"] == "sets_equal");
}

TEST_CASE("usage errors") {
    CHECK(run("").code == 2);
    CHECK(run("bogus").code == 2);
    CHECK(run("verify --n 2").code == 2);
    CHECK(run("reproduce-paper --criterion 2").code == 0);
}
