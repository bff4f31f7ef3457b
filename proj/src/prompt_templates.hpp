#pragma once

#include <string_view>

namespace fire::prompts::detail {

extern const std::string_view kDefaultTemplate;
extern const std::string_view kNoReasonTemplate;
extern const std::string_view kAtLeastOneTemplate;
extern const std::string_view kAtLeastTwoTemplate;
extern const std::string_view kInclusiveTemplate;
extern const std::string_view kFinalVerificationTemplate;
extern const std::string_view kDiversityAddendumTemplate;

} // namespace fire::prompts::detail
