#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include <permpat/bounds.hpp>
#include <permpat/enumerate.hpp>
#include <permpat/io.hpp>

using Json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(PERMPAT_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Minimal structural validator for the shipped envelope schema: checks
// "type", "required" and first-level "properties" recursively.
bool validates(const Json& schema, const Json& value);

bool type_matches(const std::string& type, const Json& value) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  return true;
}

bool validates(const Json& schema, const Json& value) {
  if (schema.contains("type")) {
    const auto& t = schema["type"];
    if (t.is_string()) {
      if (!type_matches(t.get<std::string>(), value)) return false;
    } else if (t.is_array()) {
      bool any = false;
      for (const auto& alt : t) any = any || type_matches(alt.get<std::string>(), value);
      if (!any) return false;
    }
  }
  if (schema.contains("required")) {
    for (const auto& key : schema["required"])
      if (!value.contains(key.get<std::string>())) return false;
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items())
      if (value.contains(key) && !validates(sub, value[key])) return false;
  }
  return true;
}

Json load_schema() {
  std::ifstream in(PERMPAT_SCHEMA_PATH);
  REQUIRE(in.good());
  Json schema;
  in >> schema;
  return schema;
}

}  // namespace

TEST_CASE("count subcommand reproduces the fixed example") {
  const auto r = run_cli("count --perm \"3 4 1 5 2\" --mode nonconsecutive --format json");
  REQUIRE(r.exit_code == 0);
  const Json envelope = Json::parse(r.out);
  CHECK(envelope["payload"]["total_with_empty"] == 14);
  CHECK(envelope["payload"]["per_length"] == Json::array({1, 1, 2, 5, 4, 1}));
  CHECK(envelope["command"] == "count");
  CHECK(envelope["constants"]["error_growth_base"] == 1.57);
}

TEST_CASE("envelopes validate against the shipped schema") {
  const Json schema = load_schema();
  for (const char* args : {
           "count --perm 34152",
           "exact --n 4",
           "estimate --n 5 --samples 50 --seed 3",
           "bounds --n 100 --k0 half",
           "tv --n 5 --k 2 --pattern 12",
           "sweep --what tail --n-min 8 --n-max 12 --n-step 2",
       }) {
    const auto r = run_cli(std::string(args) + " --format json");
    REQUIRE(r.exit_code == 0);
    const Json envelope = Json::parse(r.out);
    INFO(args);
    CHECK(validates(schema, envelope));
  }
}

TEST_CASE("identical invocations differ only in the elapsed field") {
  const std::string args = "estimate --n 8 --samples 300 --seed 99 --format json";
  auto a = Json::parse(run_cli(args).out);
  auto b = Json::parse(run_cli(args).out);
  a.erase("elapsed_seconds");
  b.erase("elapsed_seconds");
  a["payload"].erase("elapsed_seconds");
  b["payload"].erase("elapsed_seconds");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("csv and plain formats carry the envelope as comments") {
  const auto csv = run_cli("count --perm 34152 --format csv");
  REQUIRE(csv.exit_code == 0);
  CHECK(csv.out.find("# command=count") != std::string::npos);
  CHECK(csv.out.find("k,count") != std::string::npos);
  CHECK(csv.out.find("3,5") != std::string::npos);

  const auto plain = run_cli("count --perm 34152 --format plain");
  REQUIRE(plain.exit_code == 0);
  CHECK(plain.out.find("total_with_empty=14") != std::string::npos);
}

TEST_CASE("exact subcommand emits rationals") {
  const auto r = run_cli("exact --n 3 --format json");
  REQUIRE(r.exit_code == 0);
  const Json envelope = Json::parse(r.out);
  CHECK(envelope["payload"]["total_without_empty"] == "11/3");
}

TEST_CASE("bounds subcommand at the midpoint cutoff") {
  const auto r = run_cli("bounds --n 1000 --k0 half --format json");
  REQUIRE(r.exit_code == 0);
  const Json envelope = Json::parse(r.out);
  CHECK(envelope["payload"]["delta"].get<double>() >= 0.499);
  CHECK(envelope["payload"]["per_k"].size() == 501);
}

TEST_CASE("verify subcommand exits clean on a small sweep") {
  const auto r = run_cli("verify --suite restriction --max-k 5 --format json");
  CHECK(r.exit_code == 0);
  const Json envelope = Json::parse(r.out);
  CHECK(envelope["payload"][0]["pass"] == true);
}

TEST_CASE("exit codes distinguish usage, resource caps, and success") {
  CHECK(run_cli("count --no-such-flag").exit_code == 1);
  CHECK(run_cli("count").exit_code == 1);  // missing required --perm
  CHECK(run_cli("estimate --n 30 --samples 5").exit_code == 2);
  CHECK(run_cli("exact --n 12").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("out flag writes the payload to a file") {
  const std::string path = "/tmp/permpat_test_out.json";
  std::remove(path.c_str());
  const auto r = run_cli("count --perm 34152 --out " + path);
  REQUIRE(r.exit_code == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  Json envelope;
  in >> envelope;
  CHECK(envelope["payload"]["total_with_empty"] == 14);
  std::remove(path.c_str());
}

TEST_CASE("library serializers produce well-formed documents") {
  const auto tally = permpat::enumerate::distinct_nonconsecutive(permpat::Permutation::parse("34152"));
  const auto j = permpat::io::json_of(tally);
  CHECK(j["per_length"].size() == 6);
  const auto csv = permpat::io::csv_of(tally);
  CHECK(csv.rfind("k,count", 0) == 0);

  const auto report = permpat::bounds::bound_report(64, 32, false);
  const auto jb = permpat::io::json_of(report);
  CHECK(jb["per_k"].size() == 33);
}
