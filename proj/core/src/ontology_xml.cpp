// RDF/XML and MeSH descriptor readers built on expat.

#include <expat.h>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "neuroembed/error.hpp"
#include "neuroembed/ontology.hpp"

namespace neuroembed {
namespace {

constexpr char kSep = '|';
constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
constexpr std::string_view kOboInOwl = "http://www.geneontology.org/formats/oboInOwl#";

std::string qualified(std::string_view ns, std::string_view local) {
  std::string out(ns);
  out.push_back(kSep);
  out.append(local);
  return out;
}

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};
using ParserPtr = std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter>;

/// Runs expat over the document with the given handler object.
template <typename Handler>
void run_parser(std::string_view xml, Handler& handler, bool namespaces) {
  ParserPtr parser(namespaces ? XML_ParserCreateNS(nullptr, kSep) : XML_ParserCreate(nullptr));
  if (!parser) throw Error("cannot allocate XML parser");
  XML_SetUserData(parser.get(), &handler);
  XML_SetElementHandler(
      parser.get(),
      [](void* ud, const XML_Char* name, const XML_Char** atts) { static_cast<Handler*>(ud)->start(name, atts); },
      [](void* ud, const XML_Char* name) { static_cast<Handler*>(ud)->end(name); });
  XML_SetCharacterDataHandler(parser.get(), [](void* ud, const XML_Char* s, int len) {
    static_cast<Handler*>(ud)->chars(std::string_view(s, static_cast<std::size_t>(len)));
  });
  if (xml.size() > static_cast<std::size_t>(INT32_MAX)) throw ParseError("XML document too large");
  if (XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE) == XML_STATUS_ERROR) {
    const auto line = static_cast<std::size_t>(XML_GetCurrentLineNumber(parser.get()));
    throw ParseError(std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())), line);
  }
}

std::string_view attribute(const XML_Char** atts, std::string_view name) {
  for (std::size_t i = 0; atts[i] != nullptr; i += 2) {
    if (name == atts[i]) return atts[i + 1];
  }
  return {};
}

std::string fragment(std::string_view iri) {
  std::size_t cut = iri.find_last_of("#/");
  return std::string(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
}

class OwlHandler {
 public:
  explicit OwlHandler(OntologyId id)
      : table(id),
        class_tag_(qualified(kOwl, "Class")),
        about_(qualified(kRdf, "about")),
        id_attr_(qualified(kRdf, "ID")),
        label_tag_(qualified(kRdfs, "label")),
        synonym_tag_(qualified(kOboInOwl, "hasExactSynonym")) {}

  void start(const XML_Char* name, const XML_Char** atts) {
    ++depth_;
    if (class_depth_ == 0 && class_tag_ == name) {
      std::string_view iri = attribute(atts, about_);
      if (iri.empty()) iri = attribute(atts, id_attr_);
      if (!iri.empty()) {
        class_depth_ = depth_;
        concept_id_ = fragment(iri);
        labels_.clear();
        synonyms_.clear();
      }
      return;
    }
    if (class_depth_ != 0 && depth_ == class_depth_ + 1) {
      if (label_tag_ == name) {
        capture_ = Capture::Label;
      } else if (synonym_tag_ == name) {
        capture_ = Capture::Synonym;
      }
      buffer_.clear();
    }
  }

  void end(const XML_Char*) {
    if (class_depth_ != 0 && depth_ == class_depth_ + 1 && capture_ != Capture::None) {
      (capture_ == Capture::Label ? labels_ : synonyms_).push_back(buffer_);
      capture_ = Capture::None;
    } else if (class_depth_ != 0 && depth_ == class_depth_) {
      finish_class();
      class_depth_ = 0;
    }
    --depth_;
  }

  void chars(std::string_view s) {
    if (capture_ != Capture::None) buffer_.append(s);
  }

  SynonymTable table;

 private:
  enum class Capture { None, Label, Synonym };

  void finish_class() {
    if (labels_.empty()) {
      if (!synonyms_.empty()) table.add_warning();
      return;
    }
    table.add(concept_id_, labels_.front(), synonyms_);
  }

  const std::string class_tag_, about_, id_attr_, label_tag_, synonym_tag_;
  int depth_ = 0;
  int class_depth_ = 0;
  Capture capture_ = Capture::None;
  std::string buffer_;
  std::string concept_id_;
  std::vector<std::string> labels_;
  std::vector<std::string> synonyms_;
};

class MeshHandler {
 public:
  MeshHandler() : table(OntologyId::MESH) {}

  void start(const XML_Char* name, const XML_Char**) {
    stack_.emplace_back(name);
    if (stack_.back() == "DescriptorRecord") {
      ui_.clear();
      name_.clear();
      terms_.clear();
      in_record_ = true;
    }
    buffer_.clear();
  }

  void end(const XML_Char*) {
    if (in_record_) {
      if (path_ends_with({"DescriptorRecord", "DescriptorUI"})) {
        ui_ = buffer_;
      } else if (path_ends_with({"DescriptorRecord", "DescriptorName", "String"})) {
        name_ = buffer_;
      } else if (path_ends_with({"DescriptorRecord", "ConceptList", "Concept", "TermList", "Term", "String"})) {
        terms_.push_back(buffer_);
      } else if (stack_.back() == "DescriptorRecord") {
        if (!name_.empty()) {
          table.add(ui_, name_, terms_);
        } else {
          table.add_warning();
        }
        in_record_ = false;
      }
    }
    stack_.pop_back();
    buffer_.clear();
  }

  void chars(std::string_view s) { buffer_.append(s); }

  SynonymTable table;

 private:
  bool path_ends_with(std::initializer_list<std::string_view> tail) const {
    if (stack_.size() < tail.size()) return false;
    auto it = stack_.end() - static_cast<std::ptrdiff_t>(tail.size());
    for (std::string_view t : tail) {
      if (*it++ != t) return false;
    }
    return true;
  }

  std::vector<std::string> stack_;
  std::string buffer_;
  bool in_record_ = false;
  std::string ui_;
  std::string name_;
  std::vector<std::string> terms_;
};

}  // namespace

SynonymTable parse_owl_synonyms(std::string_view xml, OntologyId id) {
  OwlHandler handler(id);
  run_parser(xml, handler, true);
  return std::move(handler.table);
}

SynonymTable parse_mesh_concepts(std::string_view xml) {
  MeshHandler handler;
  run_parser(xml, handler, false);
  return std::move(handler.table);
}

}  // namespace neuroembed
