#include "bibcheck/catalog.hpp"

#include <algorithm>
#include <stdexcept>

namespace bibcheck {

namespace {

using L = ValidationLevel;

std::map<std::string, CatalogEntry, std::less<>> build_catalog() {
  std::map<std::string, CatalogEntry, std::less<>> c;
  c["duplicate_br"] = {Severity::Error, {L::Wellformedness},
                       "The same bibliographic resource is being represented in more than one row. Please check all "
                       "the rows involved in  the representation of this publication and unify them or remove the "
                       "extra ones."};
  c["duplicate_ra"] = {Severity::Error, {L::Wellformedness},
                       "The same responsible agent (author/editor/publisher) is reported more than once within the "
                       "same cell. Please remove the extra occurrence(s)."};
  c["people_item_format"] = {Severity::Error, {L::Wellformedness},
                             "The value representing the responsible agent entity is not well-formed. The entity for "
                             "a responsible agent is represented by the name of the person/organization, followed by "
                             "a single whitespace and one or more associated identifiers, enclosed in square brackets "
                             "and separated by a single whitespace (e.g. 'Doe, Jane [orcid:0000-0002-1825-0097]')."};
  c["br_id_format"] = {Severity::Error, {L::Wellformedness, L::ExternalSyntax},
                       "The value in this field is not expressed in compliance with the syntax of OpenCitations "
                       "CITS-CSV/META-CSV. Each identifier in 'citing_id'/'cited_id' (and in 'id' or 'venue') must "
                       "be a supported scheme prefix, followed by a colon, followed by a value that is valid for that "
                       "scheme (e.g. 'doi:10.1000/182')."};
  c["ra_id_format"] = {Severity::Error, {L::Wellformedness, L::ExternalSyntax},
                       "The identifier of the responsible agent is not well-formed. Each identifier of an author, "
                       "editor or publisher must be a supported scheme prefix, followed by a colon, followed by a "
                       "value that is valid for that scheme (e.g. 'orcid:0000-0002-1825-0097')."};
  c["br_id_existence"] = {Severity::Warning, {L::Existence},
                          "The ID is not registered anywhere as a persistent identifier for a bibliographic "
                          "resource, i.e. it does not exist."};
  c["ra_id_existence"] = {Severity::Warning, {L::Existence},
                          "The ID is not registered as a persistent identifier for any responsible agent, i.e. it "
                          "does not exist."};
  c["page_format"] = {Severity::Error, {L::Wellformedness},
                      "The value of 'page' is not well-formed. There must always be a starting page, followed by an "
                      "hyphen, followed by the end page (e.g. '1-10'); a single page is written as '15-15'."};
  c["page_interval"] = {Severity::Warning, {L::Semantics},
                        "The specified page interval seems to be impossible: the start page appears to be greater "
                        "than the end page."};
  c["uppercase_title"] = {Severity::Warning, {L::Wellformedness},
                          "The whole title of the publication is uppercase. Are you sure? Please double-check the "
                          "actual title of the publication."};
  c["self_citation"] = {Severity::Warning, {L::Semantics},
                        "It seems that a circular citation is being represented: the bibliographic resource appears "
                        "to be citing itself."};

  c["date_format"] = {Severity::Error, {L::Wellformedness},
                      "The date is not well-formed. Dates must be expressed as YYYY, YYYY-MM or YYYY-MM-DD and denote "
                      "an existing calendar day.",
                      true};
  c["type_vocab"] = {Severity::Error, {L::Wellformedness},
                     "The value of 'type' is not one of the supported publication types (e.g. 'journal article', "
                     "'book', 'dataset').",
                     true};
  c["required_field"] = {Severity::Error, {L::Wellformedness},
                         "A required value is missing. A bibliographic resource needs at least one identifier or a "
                         "title; a citation needs both the citing and the cited identifiers.",
                         true};
  c["venue_format"] = {Severity::Error, {L::Wellformedness},
                       "The value representing the venue is not well-formed. A venue is represented by its title, "
                       "optionally followed by a single whitespace and its identifiers enclosed in square brackets "
                       "(e.g. 'Scientometrics [issn:0138-9130]').",
                       true};
  c["type_id_mismatch"] = {Severity::Error, {L::Semantics},
                           "The identifier scheme is not compatible with the type of the bibliographic resource "
                           "(e.g. an ISBN for a journal article).",
                           true};
  c["container_without_venue"] = {Severity::Error, {L::Semantics},
                                  "A volume or issue is specified, but no venue containing it is given.", true};
  c["venue_type_mismatch"] = {Severity::Warning, {L::Semantics},
                              "A venue is specified for a type of publication that is normally not contained in a "
                              "venue. Please double-check the type and the venue.",
                              true};
  c["unmatched_citation_id"] = {Severity::Warning, {L::Semantics},
                                "The identifier of the citing or cited resource does not appear in the 'id' field of "
                                "any row of the accompanying metadata table.",
                                true};
  c["date_mismatch"] = {Severity::Warning, {L::Semantics},
                        "The publication date in the citation table is not compatible with the publication date of "
                        "the same resource in the metadata table.",
                        true};
  return c;
}

}  // namespace

const std::map<std::string, CatalogEntry, std::less<>>& error_catalog() {
  static const auto catalog = build_catalog();
  return catalog;
}

const CatalogEntry& catalog_entry(std::string_view label) {
  const auto& c = error_catalog();
  auto it = c.find(label);
  if (it == c.end()) throw std::logic_error("unregistered error label: " + std::string(label));
  return it->second;
}

ValidationError make_error(std::string_view label, ValidationLevel level, LocatedIn located_in, PositionTable table) {
  const auto& entry = catalog_entry(label);
  if (std::find(entry.levels.begin(), entry.levels.end(), level) == entry.levels.end()) {
    throw std::logic_error("label " + std::string(label) + " cannot be emitted at level " +
                           std::string(to_string(level)));
  }
  ValidationError e;
  e.level = level;
  e.severity = entry.severity;
  e.label = std::string(label);
  e.message = entry.message;
  e.position.located_in = located_in;
  e.position.table = std::move(table);
  return e;
}

}  // namespace bibcheck
