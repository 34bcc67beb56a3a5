#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcalc/expr.hpp"
#include "pcalc/pfamily.hpp"

namespace pcalc {

struct CorpusEntry {
  std::string name;
  Expr f;
  std::optional<Expr> fprime;  // absent for non-smooth entries
  Interval domain;
  bool smooth;
};

/// The built-in test functions, all in the variable t.
const std::vector<CorpusEntry>& corpus_list();

/// Entry by name; InvalidArgument for unknown names.
const CorpusEntry& corpus_entry(std::string_view name);

/// "corpus:NAME" resolves to the entry's f, anything else is parsed.
Expr resolve_function(std::string_view text, std::span<const std::string> parameters = {});

}  // namespace pcalc
