#pragma once

#include <map>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "bmarl/nn.hpp"

namespace bmarl {

// Versioned binary checkpoint container: a magic line, a JSON metadata
// blob, then named double-precision tensor sections. Shared by belief
// model and agent-network checkpoints.
void write_checkpoint(const std::string& path, const nlohmann::json& metadata,
                      const std::map<std::string, const nn::Vec*>& tensors);

nlohmann::json read_checkpoint(const std::string& path, std::map<std::string, nn::Vec>& tensors);
nlohmann::json read_checkpoint_metadata(const std::string& path);

// Copies flat tensors back into a parameter list by name; throws on any
// missing or mis-sized entry.
void restore_params(const nn::ParamList& params, const std::map<std::string, nn::Vec>& tensors,
                    const std::string& prefix = "");

std::map<std::string, const nn::Vec*> collect_tensors(const nn::ParamList& params,
                                                      const std::string& prefix = "");

}  // namespace bmarl
