#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "catalog.hpp"

namespace {

constexpr const char* kConfigEnv = "QTVERIFY_CONFIG";

}  // namespace

int main(int argc, char** argv) {
  using namespace qtverify;
  CLI::App app{"Exact verification of quantum torus symmetry identities"};
  app.require_subcommand(1);

  Overrides flags;
  std::string format_flag, config_path, indices_flag;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--T", flags.T, "time horizon");
    sub->add_option("--O", flags.O, "truncation depth");
    sub->add_option("--D", flags.D, "eps cap");
    sub->add_option("--P", flags.P, "M-power cutoff of the quantum flows");
    sub->add_option("--indices", indices_flag, "comma-separated index tuple");
    sub->add_option("--format", format_flag, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--config", config_path, "key = value configuration file");
  };

  std::string check_name, suite_name;
  CLI::App* verify = app.add_subcommand("verify", "run one check");
  verify->add_option("check", check_name, "check name")->required();
  add_common(verify);
  CLI::App* suite_cmd = app.add_subcommand("suite", "run a named batch of checks");
  suite_cmd->add_option("name", suite_name, "suite name")->required();
  add_common(suite_cmd);
  CLI::App* list = app.add_subcommand("list", "list registered checks");
  list->add_option("--format", format_flag, "text or json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    std::cout << (format_flag == "json" ? render_catalog_json() : render_catalog_text());
    return 0;
  }

  Overrides o;
  try {
    if (config_path.empty()) {
      if (const char* env = std::getenv(kConfigEnv)) config_path = env;
    }
    if (!config_path.empty()) o = load_config_file(config_path);
    if (!indices_flag.empty()) flags.indices = parse_indices(indices_flag);
  } catch (const std::exception& e) {
    std::cerr << "qtverify: " << e.what() << "\n";
    return 2;
  }
  if (!format_flag.empty()) flags.format = format_flag;
  o.merge(flags);
  const bool json = o.format.value_or("text") == "json";
  if (o.format && *o.format != "text" && *o.format != "json") {
    std::cerr << "qtverify: unknown format '" << *o.format << "'\n";
    return 2;
  }

  std::vector<qtorus::Report> reports;
  if (verify->parsed()) {
    reports.push_back(run_check(check_name, o));
  } else {
    auto items = suite(suite_name);
    if (!items) {
      std::cerr << "qtverify: unknown suite '" << suite_name << "'\n";
      return 2;
    }
    for (const auto& item : *items) {
      Overrides merged = item.params;
      merged.merge(o);
      // Suite entries keep their own index tuples.
      if (!item.params.indices) merged.indices.reset();
      reports.push_back(run_check(item.check, merged));
    }
  }
  std::cout << (json ? render_json(reports) : render_text(reports));
  return exit_code(reports);
}
