#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

std::string binary() {
    const char* env = std::getenv("CYCLOTRACE_BIN");
    REQUIRE(env != nullptr);
    return env;
}

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = binary() + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

} // namespace

TEST_CASE("count: known family size and passing cross-checks") {
    auto r = run("count --q 3 --r 2 --g 1 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out == "family_size,d,series_check,enumeration_check\n144,4,pass,pass\n");
}

TEST_CASE("count accepts prime powers: q = 4 with r = 3") {
    auto r = run("count --q 4 --r 3 --g 1 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.find("pass") != std::string::npos);
}

TEST_CASE("hypothesis gates exit with code 2") {
    CHECK(run("count --q 5 --r 3 --g 1").code == 2);  // 5 != 1 mod 3
    CHECK(run("count --q 4 --r 2 --g 1").code == 2);  // 4 != 1 mod 2
    CHECK(run("count --q 6 --r 5 --g 2").code == 2);  // q not a prime power
    CHECK(run("verify --q 13 --r 4 --g 2 --n-max 2").code == 2); // 2g != 0 mod 3
    CHECK(run("density --q 7 --r 3 --g 2 --alpha 0.6").code == 2); // support gate
}

TEST_CASE("verify: exact zero rows and exact decomposition at (7,3,1)") {
    auto r = run("verify --q 7 --r 3 --g 1 --n-max 3 --format csv");
    CHECK(r.code == 0);
    // n = 1, 2 vanish exactly; header plus three rows
    CHECK(r.out.find("1,0,0,0,0,0,") != std::string::npos);
    CHECK(r.out.find("2,0,0,0,0,0,") != std::string::npos);
}

TEST_CASE("byte-identical reruns, including sampled mode") {
    auto a = run("verify --q 7 --r 3 --g 1 --n-max 3 --sample 500 --seed 99 --format json");
    auto b = run("verify --q 7 --r 3 --g 1 --n-max 3 --sample 500 --seed 99 --format json");
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
    auto c = run("density --q 7 --r 3 --g-list 1 2 --testfn fejer --alpha 0.45 --format csv");
    auto d = run("density --q 7 --r 3 --g-list 1 2 --testfn fejer --alpha 0.45 --format csv");
    CHECK(c.code == 0);
    CHECK(c.out == d.out);
}

TEST_CASE("verify at q=13 stays exact through n=4 and jobs do not change bytes") {
    auto a = run("verify --q 13 --r 4 --g 3 --n-max 4 --format csv");
    CHECK(a.code == 0);
    // n = 1, 3 vanish exactly
    CHECK(a.out.find("1,0,0,0,0,0,") != std::string::npos);
    CHECK(a.out.find("3,0,0,0,0,0,") != std::string::npos);
    auto b = run("verify --q 13 --r 4 --g 3 --n-max 4 --format csv --jobs 3");
    CHECK(a.out == b.out);
}

TEST_CASE("density csv schema") {
    auto r = run("density --q 7 --r 3 --g 2 --testfn fejer --alpha 0.45 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("g,lhs,rhs_refined,rhs_ks,dev_r,residual_refined,residual_ks,sampled\n", 0) == 0);
    CHECK(r.out.find("\n2,") != std::string::npos);
}

TEST_CASE("density accepts a tabulated test function") {
    std::string path = "/tmp/cyclotrace_fhat.csv";
    {
        std::ofstream f(path);
        f << "x,fhat\n0,1\n0.25,0.5\n";
    }
    auto r = run("density --q 7 --r 3 --g 2 --testfn " + path + " --alpha 0.45 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.find("\n2,") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("json schema header and output file") {
    auto r = run("count --q 3 --r 2 --g 1 --format json");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"schema\": 1") != std::string::npos);
    CHECK(r.out.find("\"checks\"") != std::string::npos);

    std::string path = "/tmp/cyclotrace_test_out.json";
    auto w = run("count --q 3 --r 2 --g 1 --format json --out " + path);
    CHECK(w.code == 0);
    std::ifstream f(path);
    std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(content == r.out);
    std::remove(path.c_str());
}
