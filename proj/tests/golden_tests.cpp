// Compares `classify --json` on every input in the golden directory with its stored
// report (timing_ms ignored), and re-validates each stored report.
// Pass --update to rewrite the stored reports.

#include "quasitame/cli.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args, std::string &out) {
  args.insert(args.begin(), "quasitame");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = quasitame::run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  return code;
}

nlohmann::json without_timing(std::string_view text) {
  auto j = nlohmann::json::parse(text);
  j.erase("timing_ms");
  return j;
}

} // namespace

int main(int argc, char **argv) {
  const bool update = argc > 1 && std::string(argv[1]) == "--update";
  const fs::path dir = QUASITAME_GOLDEN_DIR;
  std::vector<fs::path> inputs;
  for (const auto &ent : fs::directory_iterator(dir)) {
    const auto ext = ent.path().extension();
    if (ext == ".qcg" || ext == ".invsys") inputs.push_back(ent.path());
  }
  std::sort(inputs.begin(), inputs.end());

  int failed = 0;
  for (const auto &in : inputs) {
    fs::path golden = in;
    golden.replace_extension(".json");
    std::string out;
    if (run({"classify", "--json", in.string()}, out) != 0) {
      std::cout << "FAIL " << in.filename().string() << ": classify failed\n";
      ++failed;
      continue;
    }
    if (update) {
      auto j = nlohmann::json::parse(out);
      j["timing_ms"] = 0;
      std::ofstream(golden) << j.dump(2) << "\n";
      continue;
    }
    std::ifstream f(golden);
    if (!f) {
      std::cout << "FAIL " << in.filename().string() << ": no golden report\n";
      ++failed;
      continue;
    }
    std::stringstream stored;
    stored << f.rdbuf();
    std::string ignored;
    if (without_timing(stored.str()) != without_timing(out)) {
      std::cout << "FAIL " << in.filename().string() << ": output differs from golden\n";
      ++failed;
    } else if (run({"check-witness", in.string(), golden.string()}, ignored) != 0) {
      std::cout << "FAIL " << in.filename().string() << ": golden report does not check\n";
      ++failed;
    }
  }
  std::cout << inputs.size() << " golden inputs, " << failed << " failed"
            << (update ? " (updated)" : "") << "\n";
  return failed == 0 ? 0 : 1;
}
