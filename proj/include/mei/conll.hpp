#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mei/types.hpp"

namespace mei {

/// Parses CoNLL-2012 style coreference annotation.
///
/// Recognized structure:
///   #begin document (<id>); part NNN
///   <columns>            word in column 4, coreference field in the last column
///   <blank line>         sentence boundary
///   #end document
///
/// Multiple parts of the same document id are concatenated in file order,
/// with token indices and cluster ids remapped to the whole document.
/// Clusters are renumbered 0..n-1 by order of first appearance.
std::vector<AnnotatedDocument> read_conll(std::istream& in);
std::vector<AnnotatedDocument> read_conll_file(const std::string& path);

}  // namespace mei
