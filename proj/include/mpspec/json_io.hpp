// JSON views of the report types, with stable field order so identical
// inputs dump byte-identical documents. Documents produced by the CLI wrap
// these payloads with {"schema_version": 1, "command": ...}.
#pragma once

#include "json.hpp"

#include "mpspec/bounds.hpp"
#include "mpspec/nonlinear.hpp"
#include "mpspec/oracle.hpp"
#include "mpspec/scenarios.hpp"
#include "mpspec/spectrum.hpp"

namespace mpspec {

using ojson = nlohmann::ordered_json;

const char* family_name(Family f);

ojson to_ojson(const EigenCertificates& c);
ojson to_ojson(const Eigenpair& pair);
ojson to_ojson(const SpectrumResult& sr);
ojson to_ojson(const OracleResult& orc);
ojson to_ojson(const ScanResult& scan);
ojson to_ojson(const InterlacingReport& rep);
ojson to_ojson(const AprioriConstants& c);
ojson to_ojson(const NonlinearConstants& c);
ojson to_ojson(const BVPSolution& sol);
ojson to_ojson(const CrossingReport& cr);
ojson to_ojson(const Branch& br);
ojson to_ojson(const GapReport& rep);
ojson to_ojson(const DoubleEigenReport& rep);

}  // namespace mpspec
