#pragma once

#include <stdexcept>
#include <string>

#include "airway/tracer.hpp"

namespace airway {

// Unknown or malformed config keys are fatal; the offending key is carried in
// the message.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value config, keys namespaced by module (e.g. gvf.mu=0.1).
// '#' starts a comment; blank lines are ignored. Misspelled keys throw.
TraceConfig load_config(const std::string& path);
TraceConfig parse_config_text(const std::string& text);
void apply_config_key(TraceConfig& c, const std::string& key, const std::string& value);

// Every key with its default, one per line, for --help.
std::string config_help();
// Current values in the same key=value format (round-trips through parse).
std::string dump_config(const TraceConfig& c);

}  // namespace airway
