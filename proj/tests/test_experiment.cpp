#include <sstream>

#include "doctest.h"
#include "etdg/experiment.hpp"

using namespace etdg;

namespace {

std::string csv_of(const ExperimentConfig& c) {
  std::ostringstream out;
  write_csv(out, run_experiment(c));
  return out.str();
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# study\n"
      "case = AR_EXAMPLE\n"
      "methods = et, dg\n"
      "p = 3\n"
      "n = 4,8   # two meshes\n"
      "sigma = 12.5\n"
      "box_scale = 0.3\n");
  const auto c = parse_config(in);
  CHECK(c.case_name == "AR_EXAMPLE");
  CHECK(c.methods == std::vector<std::string>{"et", "dg"});
  CHECK(c.n_list == std::vector<int>{4, 8});
  CHECK(*c.sigma == 12.5);
  CHECK(c.box_scale == 0.3);

  std::istringstream bad_key("colour = red\n");
  CHECK_THROWS_AS(parse_config(bad_key), UsageError);
  std::istringstream bad_int("p = three\n");
  CHECK_THROWS_AS(parse_config(bad_int), UsageError);
  std::istringstream no_eq("p 3\n");
  CHECK_THROWS_AS(parse_config(no_eq), UsageError);
}

TEST_CASE("validation") {
  ExperimentConfig c;
  c.case_name = "AR_EXAMPLE";
  c.methods = {"qt"};
  c.p_list = {3};
  c.n_list = {4};
  CHECK_THROWS_AS(validate(c), UsageError);
  c.methods = {"etbox"};
  CHECK_THROWS_AS(validate(c), UsageError);
  c.methods = {"et"};
  CHECK_NOTHROW(validate(c));
  c.p_list = {0};
  CHECK_THROWS_AS(validate(c), UsageError);
  c.p_list = {7};
  CHECK_THROWS_AS(validate(c), UsageError);
  c.p_list = {3};
  c.n_list = {0};
  CHECK_THROWS_AS(validate(c), UsageError);
  c.n_list = {4};
  c.case_name = "NOPE";
  CHECK_THROWS_AS(validate(c), UsageError);
  c.case_name = "DAR_EXAMPLE";
  c.methods = {"et"};
  c.p_list = {1};
  CHECK_THROWS_AS(validate(c), UsageError);
  c.p_list = {2};
  c.sigma = -1.0;
  CHECK_THROWS_AS(validate(c), UsageError);
}

TEST_CASE("experiment rows, ordering and determinism") {
  ExperimentConfig c;
  c.case_name = "AR_EXAMPLE";
  c.methods = {"et", "dg"};
  c.p_list = {3};
  c.n_list = {8, 4};
  const auto rows = run_experiment(c);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].method == "dg");
  CHECK(rows[0].n == 4);
  CHECK(rows[1].n == 8);
  CHECK(rows[2].method == "et");
  CHECK(rows[2].ndof_trefftz == 32 * 4);
  CHECK(rows[2].ndof_full == 32 * 10);

  const std::string first = csv_of(c);
  CHECK(first.rfind("method,p,h,ndof_full,ndof_trefftz,l2error,dgerror\n", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), '\n') == 5);
  CHECK(first.find('\r') == std::string::npos);
  CHECK(csv_of(c) == first);

  std::ostringstream summary;
  write_eoc_summary(summary, rows);
  CHECK(summary.str().find("least-squares eoc") != std::string::npos);
}
