#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tepgnn::miner {

class MalformedReport : public std::runtime_error {
 public:
  MalformedReport(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Start tag as seen by the scanner. Attribute values are entity-decoded;
/// `attr_offsets` holds the byte offset of each value's opening quote.
struct XmlElement {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::map<std::string, std::size_t> attr_offsets;
  std::size_t offset = 0;
};

struct XmlHandler {
  std::function<void(const XmlElement&)> open;
  std::function<void(std::string_view name)> close;  // also fired for self-closing tags
};

/// Event scanner for the XML subset test reports use: prolog, comments,
/// CDATA, DOCTYPE (skipped), elements, attributes, character/entity refs.
/// Text content is ignored. Checks tag nesting and that exactly one root
/// element exists; violations throw MalformedReport with the byte offset.
void scan_xml(std::string_view xml, const XmlHandler& handler);

}  // namespace tepgnn::miner
