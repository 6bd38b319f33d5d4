#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "omamrc/cli.hpp"

namespace omamrc::cli {
namespace {

namespace fs = std::filesystem;

const char* const kSymmetric = R"(
[network]
M = 3
L = 3
T_max = 3
alpha = 0.5

[rates]
values = [1.0, 1.0, 1.0]

[sweep]
type = "symmetric_gamma"
values_db = [0.0, 5.0]

[run]
frames = 200
seed = 42
)";

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("omamrc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text)
    {
        const auto path = dir_ / name;
        std::ofstream(path) << text;
        return path;
    }

    static std::string read(const fs::path& path)
    {
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    int run(const fs::path& config, Overrides overrides)
    {
        std::ostringstream err;
        const int code = execute(config, overrides, err);
        last_error_ = err.str();
        return code;
    }

    static std::vector<std::string> lines(const std::string& text)
    {
        std::vector<std::string> out;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);) {
            out.push_back(line);
        }
        return out;
    }

    fs::path dir_;
    std::string last_error_;
};

TEST_F(CliTest, ParsesNetworkSweepAndRun)
{
    const auto spec = parse_run_spec(kSymmetric);
    EXPECT_EQ(spec.network.sources, 3);
    EXPECT_EQ(spec.network.relays, 3);
    EXPECT_EQ(spec.network.max_rounds, 3);
    EXPECT_EQ(spec.network.alpha, 0.5);
    EXPECT_EQ(spec.network.rates, std::vector<double>(3, 1.0));
    EXPECT_EQ(spec.sweep_values_db, (std::vector<double>{0.0, 5.0}));
    EXPECT_EQ(spec.frames, 200u);
    EXPECT_EQ(spec.seed, 42u);
    EXPECT_EQ(spec.strategies.size(), 5u);
}

TEST_F(CliTest, RangeSweepAndTopLevelRates)
{
    const auto spec = parse_run_spec(R"(
rates = [3.0, 2.5]
[network]
M = 2
L = 1
T_max = 2
alpha = 1.0
[sweep]
start_db = -2.0
stop_db = 4.0
step_db = 2.0
)");
    EXPECT_EQ(spec.network.rates, (std::vector<double>{3.0, 2.5}));
    EXPECT_EQ(spec.sweep_values_db, (std::vector<double>{-2.0, 0.0, 2.0, 4.0}));
}

TEST_F(CliTest, GainsBaseAndOverrides)
{
    const auto spec = parse_run_spec(std::string(kSymmetric) + R"(
[gains]
symmetric_db = 5.0
"s1->r2" = -10.0
"r3->d" = 15.0
)");
    EXPECT_EQ(spec.network.link_gains_db.at({source_node(0), relay_node(1)}), -10.0);
    EXPECT_EQ(spec.network.link_gains_db.at({relay_node(2), destination_node()}), 15.0);
    EXPECT_EQ(spec.network.link_gains_db.at({source_node(1), destination_node()}), 5.0);
}

TEST_F(CliTest, CsvSchema)
{
    const auto out = dir_ / "out.csv";
    ASSERT_EQ(run(write("c.toml", kSymmetric), {.output = out.string(), .strategies = {"strategy1", "reference1"}}),
              kOk)
        << last_error_;
    const auto rows = lines(read(out));
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0], "scenario,sweep_value_db,strategy,frames,seed,mean_T,p_common_outage,p_outage_s1,"
                       "p_outage_s2,p_outage_s3,eta,eta_norm,selected_rate");
    EXPECT_EQ(rows[1].rfind("symmetric_gamma,0,strategy1,200,42,", 0), 0u);
    EXPECT_EQ(rows[2].rfind("symmetric_gamma,0,reference1,200,42,", 0), 0u);
    EXPECT_EQ(rows[3].rfind("symmetric_gamma,5,strategy1,", 0), 0u);
    EXPECT_EQ(rows[1].back(), ',');
    EXPECT_EQ(std::count(rows[1].begin(), rows[1].end(), ','), 12);
}

TEST_F(CliTest, CsvMatchesLibraryMetrics)
{
    const auto out = dir_ / "out.csv";
    ASSERT_EQ(run(write("c.toml", kSymmetric), {.output = out.string(), .strategies = {"strategy2"}}), kOk);
    const auto net = *validate_config(symmetric_config(3, 3, 3, 0.5, {1, 1, 1}, 5.0)).network;
    const auto m = compute_metrics(run_monte_carlo(net, Strategy::strategy2, 200, 42), net, Strategy::strategy2);
    const auto row = lines(read(out))[2];
    EXPECT_NE(row.find("," + format_number(m.eta) + "," + format_number(m.eta_norm) + ","), std::string::npos);
}

TEST_F(CliTest, ByteIdenticalAcrossRunsAndWorkers)
{
    const auto config = write("c.toml", kSymmetric);
    const auto a = dir_ / "a.csv";
    const auto b = dir_ / "b.csv";
    const auto c = dir_ / "c.csv";
    ASSERT_EQ(run(config, {.output = a.string(), .frames = 1, .seed = 42}), kOk);
    ASSERT_EQ(run(config, {.output = b.string(), .frames = 1, .seed = 42}), kOk);
    EXPECT_EQ(read(a), read(b));
    ASSERT_EQ(run(config, {.output = a.string(), .workers = 1}), kOk);
    ASSERT_EQ(run(config, {.output = c.string(), .workers = 4}), kOk);
    EXPECT_EQ(read(a), read(c));
}

TEST_F(CliTest, ExitCodes)
{
    const auto good = write("good.toml", kSymmetric);
    EXPECT_EQ(run(write("bad.toml", "[network]\nM = \"three\"\n"), {}), kConfigError);
    EXPECT_EQ(run(write("broken.toml", "[network\n"), {}), kConfigError);
    EXPECT_EQ(run(dir_ / "missing.toml", {}), kConfigError);
    EXPECT_EQ(run(good, {.strategies = {"strategy9"}}), kUsageError);
    EXPECT_NE(last_error_.find("strategy9"), std::string::npos);
    EXPECT_EQ(run(good, {.sweep = "sideways"}), kUsageError);
    EXPECT_EQ(run(good, {.output = (dir_ / "no_such_dir" / "x.csv").string()}), kRuntimeError);

    std::string bad_rate = kSymmetric;
    bad_rate.replace(bad_rate.find("[1.0, 1.0, 1.0]"), 15, "[1.0, 1.0, 0.0]");
    EXPECT_EQ(run(write("rate.toml", bad_rate), {}), kConfigError);
    EXPECT_NE(last_error_.find("non-positive rate for source 2"), std::string::npos);
}

TEST_F(CliTest, UpperBoundCapEnforced)
{
    std::string big = kSymmetric;
    big.replace(big.find("T_max = 3"), 9, "T_max = 7");
    // 6^7 = 279936 sequences
    EXPECT_EQ(run(write("big.toml", big), {.strategies = {"upper_bound"}}), kConfigError);
    EXPECT_NE(last_error_.find("upper_bound_cap"), std::string::npos);
    const auto out = dir_ / "o.csv";
    EXPECT_EQ(run(write("big.toml", big), {.output = out.string(), .frames = 1, .strategies = {"strategy1"}}), kOk);
}

TEST_F(CliTest, DeltaGammaSweepShape)
{
    const auto out = dir_ / "d.csv";
    const auto config = write("d.toml", R"(
[network]
M = 3
L = 2
T_max = 2
alpha = 0.5
[rates]
values = [3.0, 2.5, 2.0]
[sweep]
type = "delta_gamma"
values_db = [-5.0, 0.0, 5.0]
[gains]
symmetric_db = 0.0
"s1->d" = -10.0
"r2->d" = 15.0
[run]
frames = 50
strategies = ["strategy1", "strategy3", "upper_bound"]
)");
    ASSERT_EQ(run(config, {.output = out.string()}), kOk) << last_error_;
    const auto rows = lines(read(out));
    ASSERT_EQ(rows.size(), 10u);
    EXPECT_EQ(rows[9].rfind("delta_gamma,5,upper_bound,50,1,", 0), 0u);
    EXPECT_EQ(run(write("nogains.toml", R"(
[network]
M = 2
L = 1
T_max = 1
alpha = 0.5
rates = [1.0, 1.0]
[sweep]
type = "delta_gamma"
values_db = [0.0]
)"),
                  {}),
              kConfigError);
}

TEST_F(CliTest, LinkAdaptationRows)
{
    const auto out = dir_ / "la.csv";
    const auto config = write("la.toml", R"(
[network]
M = 3
L = 3
T_max = 3
alpha = 0.5
[rates]
values = [1.0, 1.0, 1.0]
[sweep]
type = "link_adaptation"
values_db = [35.0]
mcs_rates = [0.5, 3.5]
[run]
frames = 100
strategies = ["strategy2"]
)");
    ASSERT_EQ(run(config, {.output = out.string()}), kOk) << last_error_;
    const auto rows = lines(read(out));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1].rfind("link_adaptation,35,strategy2,", 0), 0u);
    EXPECT_EQ(rows[1].substr(rows[1].rfind(',') + 1), "3.5");
    EXPECT_EQ(rows[2].rfind("link_adaptation_rate,35,strategy2,", 0), 0u);
    EXPECT_EQ(rows[2].substr(rows[2].rfind(',') + 1), "0.5");
    EXPECT_EQ(rows[3].substr(rows[3].rfind(',') + 1), "3.5");
}

TEST_F(CliTest, BinaryReportsUsageErrors)
{
    const auto config = write("c.toml", kSymmetric);
    const std::string exe = OMAMRC_SIM_PATH;
    const auto status = [](const std::string& cmd) {
        const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status(exe + " --help"), 0);
    EXPECT_EQ(status(exe + " --bogus"), kUsageError);
    EXPECT_EQ(status(exe + " --config " + config.string() + " --strategy nope"), kUsageError);
    EXPECT_EQ(status(exe + " --config " + config.string() + " --frames 2 --output " + (dir_ / "x.csv").string()),
              kOk);
    EXPECT_EQ(lines(read(dir_ / "x.csv")).size(), 11u);
}

TEST(ShippedConfigs, LoadAndValidate)
{
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(OMAMRC_CONFIG_DIR)) {
        if (entry.path().extension() != ".toml") {
            continue;
        }
        ++seen;
        const auto spec = load_run_spec(entry.path());
        EXPECT_NO_THROW(check_runnable(spec)) << entry.path();
        EXPECT_FALSE(spec.output.empty()) << entry.path();
    }
    EXPECT_EQ(seen, 3);
}

} // namespace
} // namespace omamrc::cli
