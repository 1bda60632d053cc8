#ifndef STOCS_PARSER_HPP
#define STOCS_PARSER_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stocs/model.hpp"
#include "stocs/term.hpp"

namespace stocs {

struct ParseError {
  int line = 0;
  int col = 0;
  std::string message;
  std::vector<std::string> expected;

  std::string to_string() const;
};

class ParseErrorException : public std::runtime_error {
 public:
  explicit ParseErrorException(ParseError e)
      : std::runtime_error(e.to_string()), error(std::move(e)) {}

  ParseError error;
};

struct Diagnostic {
  int line = 0;
  int col = 0;
  std::string severity = "error";
  std::string message;
};

std::string format_diagnostic(const std::string& file, const Diagnostic& d);

struct InterfaceRuleDecl {
  std::string attr;
  AttributeRule rule;
  int line = 0, col = 0;
};

struct ComponentDecl {
  std::string name;
  int count = 1;  // replication
  std::vector<InterfaceRuleDecl> interface;
  std::vector<Item> knowledge;
  ProcessRef process;
  int line = 0, col = 0;
};

struct ProcDecl {
  std::string name;
  ProcessDef def;
  int line = 0, col = 0;
};

// A parsed model file: attribute declarations, process definitions,
// component declarations and an optional rate configuration reference.
struct ModelFile {
  std::vector<std::string> attributes;
  std::vector<ProcDecl> procs;
  std::vector<ComponentDecl> components;
  std::string rates_path;

  DefinitionsTable defs() const;
};

// Throws ParseErrorException on malformed input.
ModelFile parse_model(const std::string& text);

std::optional<ModelFile> try_parse_model(const std::string& text, ParseError* error);

// Standalone entry points used by tests and tools.
ProcessRef parse_process_text(const std::string& text, const std::string& context = "process");
PredicateRef parse_predicate_text(const std::string& text);

// Static checks: guardedness of recursion, call arity, declared attributes,
// bound variables. Returns an empty list iff the model is well-formed.
std::vector<Diagnostic> check_model(const ModelFile& m);

std::string print_model(const ModelFile& m);

// Instantiates a checked model file into a runtime model and initial state.
std::pair<Model, SystemState> build_system(const ModelFile& m,
                                           std::shared_ptr<const RateConfig> rates);

}  // namespace stocs

#endif
