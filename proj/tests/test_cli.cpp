#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bisched/cli.hpp"
#include "bisched/io.hpp"

using namespace bisched;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
   std::ifstream in(p, std::ios::binary);
   std::ostringstream ss;
   ss << in.rdbuf();
   return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
   std::ofstream(p, std::ios::binary) << text;
}

const fs::path kData = BISCHED_EXAMPLES_DIR;

class Cli : public ::testing::Test {
 protected:
   void SetUp() override {
      dir_ = fs::temp_directory_path() /
             ("bisched_cli_" + std::string(::testing::UnitTest::GetInstance()
                                                ->current_test_info()
                                                ->name()));
      fs::create_directories(dir_);
   }
   void TearDown() override { fs::remove_all(dir_); }

   int run(const std::vector<std::string>& args) {
      out_.str("");
      err_.str("");
      return cli::run(args, out_, err_);
   }
   std::string path(const std::string& name) const { return (dir_ / name).string(); }

   fs::path dir_;
   std::ostringstream out_;
   std::ostringstream err_;
};

}  // namespace

TEST(Format, MinimalInstanceRoundTrips) {
   const std::string text =
        "{\"edges\":[],\"jobs\":[{\"id\":0,\"p\":1}],"
        "\"machines\":{\"kind\":\"identical\",\"m\":1}}\n";
   EXPECT_EQ(io::instance_to_string(io::instance_from_string(text)), text);
}

TEST(Format, GoldenInstanceRoundTrips) {
   const auto text = slurp(kData / "gilbert_n4_seed42.json");
   const auto inst = io::instance_from_string(text);
   EXPECT_EQ(io::instance_to_string(inst), text);
   // Speeds are stored in file order; machine 0 of the file has speed 1.
   EXPECT_EQ(inst.env().speed(0), Rational(3));
   EXPECT_EQ(inst.env().label(0), 1u);
}

TEST(Format, GoldenScheduleLoads) {
   const auto inst = io::instance_from_string(slurp(kData / "gilbert_n4_seed42.json"));
   const auto text = slurp(kData / "gilbert_n4_seed42.sqrt-psum.json");
   const auto s = io::schedule_from_string(text, inst);
   EXPECT_TRUE(validate(s, inst).valid);
   EXPECT_EQ(io::schedule_to_string(s, inst), text);
}

TEST(Format, UnrelatedRoundTrip) {
   const auto inst = Instance::unrelated({{1, 2, 3}, {4, 5, 6}}, {{2, 0}});
   const auto text = io::instance_to_string(inst);
   EXPECT_EQ(text,
             "{\"edges\":[[0,2]],\"jobs\":[{\"id\":0,\"p_row\":[1,4]},"
             "{\"id\":1,\"p_row\":[2,5]},{\"id\":2,\"p_row\":[3,6]}],"
             "\"machines\":{\"kind\":\"unrelated\",\"m\":2}}\n");
   EXPECT_EQ(io::instance_to_string(io::instance_from_string(text)), text);
}

TEST(Format, Diagnostics) {
   const auto base = [](const std::string& edges, const std::string& speeds) {
      return "{\"edges\":" + edges +
             ",\"jobs\":[{\"id\":0,\"p\":1},{\"id\":1,\"p\":1},{\"id\":2,\"p\":1}],"
             "\"machines\":{\"kind\":\"uniform\",\"m\":1,\"speeds\":[" +
             speeds + "]}}\n";
   };
   EXPECT_THROW(io::instance_from_string(base("[[0,0]]", "\"1/1\"")),
                io::ParseError);
   try {
      io::instance_from_string(base("[[0,0]]", "\"1/1\""));
   } catch (const io::ParseError& e) {
      EXPECT_NE(std::string(e.what()).find("self-loop"), std::string::npos);
   }
   try {
      io::instance_from_string(base("[[0,1],[1,2],[0,2]]", "\"1/1\""));
      FAIL();
   } catch (const io::ParseError& e) {
      EXPECT_NE(std::string(e.what()).find("odd cycle"), std::string::npos);
   }
   EXPECT_THROW(io::instance_from_string(base("[]", "\"2/4\"")), io::ParseError);
   EXPECT_THROW(io::instance_from_string(base("[]", "\"2\"")), io::ParseError);
   try {
      io::instance_from_string("{\n  \"edges\": [,]\n}", "bad.json");
      FAIL();
   } catch (const io::ParseError& e) {
      EXPECT_NE(std::string(e.what()).find("bad.json:2:"), std::string::npos)
           << e.what();
   }
}

TEST(Format, ScheduleMakespanIsChecked) {
   const auto inst = Instance::with_requirements({2, 3}, MachineEnv::identical(2), {});
   EXPECT_NO_THROW(io::schedule_from_string(
        "{\"assignment\":[0,1],\"makespan\":\"3/1\"}", inst));
   EXPECT_THROW(io::schedule_from_string(
                     "{\"assignment\":[0,1],\"makespan\":\"2/1\"}", inst),
                io::ParseError);
   EXPECT_THROW(io::schedule_from_string(
                     "{\"assignment\":[0,5],\"makespan\":\"3/1\"}", inst),
                MalformedSchedule);
}

TEST(Format, McCsvGolden) {
   const auto report =
        mc_stats(GilbertParams::with_mean_degree(20, Rational(1), 7),
                 MachineEnv::identical(3), 3);
   EXPECT_EQ(io::mc_csv(report), slurp(kData / "mc_n20_a1_seed7.csv"));
}

TEST_F(Cli, GenIsDeterministic) {
   ASSERT_EQ(run({"gen", "gilbert", "--n", "30", "--p", "1/10", "--seed", "42",
                  "-o", path("a.json")}),
             0);
   ASSERT_EQ(run({"gen", "gilbert", "--n", "30", "--p", "1/10", "--seed", "42",
                  "-o", path("b.json")}),
             0);
   EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
   EXPECT_EQ(run({"gen", "gilbert", "--n", "4", "--p", "1/2", "--seed", "42",
                  "--speeds", "1,3,2"}),
             0);
   EXPECT_EQ(out_.str(), slurp(kData / "gilbert_n4_seed42.json"));
}

TEST_F(Cli, SeedIsRequired) {
   EXPECT_EQ(run({"gen", "gilbert", "--n", "3", "--p", "1/2"}), 2);
   EXPECT_EQ(run({"gen", "gadget", "--kind", "H1", "--x", "2"}), 2);
   EXPECT_EQ(run({"bench", "mc", "--n", "3", "--a", "1", "--trials", "2"}), 2);
}

TEST_F(Cli, UsageErrors) {
   EXPECT_EQ(run({}), 2);
   EXPECT_EQ(run({"solve", "--alg", "magic", "-i", "x.json"}), 2);
   EXPECT_EQ(run({"gen", "gilbert", "--n", "3", "--seed", "1"}), 2);
   EXPECT_EQ(run({"--help"}), 0);
}

TEST_F(Cli, SolveThenVerify) {
   const auto inst = kData / "gilbert_n4_seed42.json";
   for (const std::string alg : {"sqrt-psum", "alg2", "oracle"}) {
      ASSERT_EQ(run({"solve", "--alg", alg, "-i", inst.string(), "-o",
                     path(alg + ".json")}),
                0)
           << err_.str();
      EXPECT_EQ(run({"verify", "-i", inst.string(), "-s", path(alg + ".json")}), 0);
      EXPECT_NE(out_.str().find("valid makespan="), std::string::npos);
   }
}

TEST_F(Cli, SolveR2AndQ2) {
   io::write_instance(Instance::unrelated({{2, 7, 1}, {3, 9, 4}}, {{0, 1}}),
                      path("r2.json"));
   for (const std::string alg : {"r2-2apx", "r2-fptas", "oracle"}) {
      ASSERT_EQ(run({"solve", "--alg", alg, "--eps", "1/10", "-i", path("r2.json"),
                     "-o", path("s.json")}),
                0)
           << err_.str();
      EXPECT_EQ(run({"verify", "-i", path("r2.json"), "-s", path("s.json")}), 0);
   }
   io::write_instance(Instance::with_requirements(
                           {1, 1, 1}, MachineEnv::uniform({Rational(1), Rational(2)}),
                           {{0, 1}, {1, 2}}),
                      path("q2.json"));
   ASSERT_EQ(run({"solve", "--alg", "q2-exact-unit", "-i", path("q2.json")}), 0);
   const auto inst = io::parse_instance(path("q2.json"));
   const auto s = io::schedule_from_string(out_.str(), inst);
   EXPECT_EQ(makespan(s, inst), Rational(1));
   // Machine labels in the file refer to the file's machine order.
   EXPECT_EQ(s.assignment, (std::vector<std::size_t>{0, 1, 0}));
   EXPECT_NE(out_.str().find("\"assignment\":[1,0,1]"), std::string::npos);
}

TEST_F(Cli, VerifyReportsConflicts) {
   io::write_instance(Instance::with_requirements({1, 1}, MachineEnv::identical(2),
                                                  {{0, 1}}),
                      path("i.json"));
   spit(path("s.json"), "{\"assignment\":[0,0],\"makespan\":\"2/1\"}\n");
   EXPECT_EQ(run({"verify", "-i", path("i.json"), "-s", path("s.json")}), 1);
   EXPECT_NE(out_.str().find("violation: jobs 0 and 1"), std::string::npos);
}

TEST_F(Cli, InfeasibleAndBudget) {
   io::write_instance(Instance::with_requirements({1, 1}, MachineEnv::identical(1),
                                                  {{0, 1}}),
                      path("one.json"));
   EXPECT_EQ(run({"solve", "--alg", "oracle", "-i", path("one.json")}), 1);
   const std::vector<std::int64_t> many(20, 1);
   io::write_instance(Instance::with_requirements(many, MachineEnv::identical(3), {}),
                      path("big.json"));
   EXPECT_EQ(run({"solve", "--alg", "oracle", "-i", path("big.json")}), 3);
   EXPECT_EQ(run({"solve", "--alg", "oracle", "-i", path("missing.json")}), 1);
}

TEST_F(Cli, GadgetAndHardness) {
   ASSERT_EQ(run({"gen", "gadget", "--kind", "H3", "--x", "2", "--x1", "1", "--x2",
                  "1", "--seed", "0", "-o", path("g.json")}),
             0);
   EXPECT_EQ(io::parse_instance(path("g.json")).n(), 1u + 2 * 2 + 1 + 1);

   spit(path("pre.json"), "{\"anchors\":[0,2,3],\"edges\":[[0,1],[1,2]],\"n\":4}\n");
   ASSERT_EQ(run({"gen", "hardness-uniform", "--pre", path("pre.json"), "--k", "1",
                  "--seed", "0", "-o", path("hq.json"), "--witness", path("hw.json")}),
             0)
        << err_.str();
   EXPECT_EQ(io::parse_instance(path("hq.json")).n(), 214u);
   EXPECT_EQ(run({"verify", "-i", path("hq.json"), "-s", path("hw.json")}), 0);

   ASSERT_EQ(run({"gen", "hardness-unrelated", "--n", "6", "--c", "1", "--b", "1",
                  "--eps", "1/1", "--seed", "3", "-o", path("hr.json")}),
             0)
        << err_.str();
   const auto hr = io::parse_instance(path("hr.json"));
   EXPECT_EQ(hr.n(), 6u);
   EXPECT_EQ(hr.requirement(1, 0), 6 * 6 + 1);
}

TEST_F(Cli, BenchMcCsv) {
   ASSERT_EQ(run({"bench", "mc", "--n", "2000", "--a", "1/1", "--trials", "50",
                  "--seed", "7", "--csv", path("mc.csv")}),
             0);
   std::istringstream csv(slurp(path("mc.csv")));
   std::string line;
   std::getline(csv, line);
   EXPECT_EQ(line, io::mc_csv_header());
   std::size_t rows = 0, footer = 0;
   while (std::getline(csv, line)) {
      (line.rfind('#', 0) == 0 ? footer : rows) += 1;
   }
   EXPECT_EQ(rows, 50u);
   EXPECT_EQ(footer, 10u);
}

TEST_F(Cli, BenchRatioSweep) {
   ASSERT_EQ(run({"bench", "ratio-sweep", "--alg", "r2-fptas", "--eps", "1/2",
                  "--trials", "10", "--seed", "1"}),
             0);
   std::istringstream csv(out_.str());
   std::string line;
   std::getline(csv, line);
   EXPECT_EQ(line, "trial,n,m,alg_num,alg_den,opt_num,opt_den,ratio");
   std::size_t rows = 0;
   while (std::getline(csv, line)) {
      if (line.rfind('#', 0) != 0) ++rows;
   }
   EXPECT_EQ(rows, 10u);
}

TEST(Binary, ExitCodes) {
   const std::string exe = BISCHED_CLI_PATH;
   EXPECT_EQ(std::system((exe + " > /dev/null 2>&1").c_str()) >> 8, 2);
   EXPECT_EQ(std::system((exe + " --help > /dev/null 2>&1").c_str()) >> 8, 0);
   const auto inst = (kData / "gilbert_n4_seed42.json").string();
   const auto sched = (kData / "gilbert_n4_seed42.sqrt-psum.json").string();
   EXPECT_EQ(std::system((exe + " verify -i " + inst + " -s " + sched +
                          " > /dev/null 2>&1")
                              .c_str()) >>
                  8,
             0);
}
