#pragma once

#include <istream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace ricci::cli {

/// Reads JSON config files for CLI11. Top-level keys set global options;
/// a nested object named after a subcommand sets that subcommand's options.
/// Arrays become repeated values, booleans "true"/"false".
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    write(app, default_also, doc);
    return doc.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& ex) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") + ex.what());
    }
    if (!doc.is_object()) throw CLI::ConfigError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    flatten(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    if (value.is_number()) return value.dump();
    throw CLI::ConfigError("unsupported config value " + value.dump());
  }

  static void flatten(const nlohmann::json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        flatten(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else if (!value.is_null()) {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }

  static void write(const CLI::App* app, bool default_also, nlohmann::ordered_json& doc) {
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const auto& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        auto values = opt->results();
        doc[name] = values.size() == 1 ? nlohmann::ordered_json(values.front())
                                       : nlohmann::ordered_json(values);
      } else if (default_also && !opt->get_default_str().empty()) {
        doc[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      nlohmann::ordered_json nested = nlohmann::ordered_json::object();
      write(sub, default_also, nested);
      if (!nested.empty()) doc[sub->get_name()] = nested;
    }
  }
};

}  // namespace ricci::cli
