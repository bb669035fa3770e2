/*******************************************************************************
* Copyright 2026 The fracctl Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*******************************************************************************/

#include "fracctl/error.hpp"

namespace fracctl {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::domain: return "domain error";
        case ErrorKind::validation: return "validation error";
        case ErrorKind::convergence: return "not converged";
        case ErrorKind::divergence: return "loop diverged";
        case ErrorKind::non_physical: return "non-physical solution";
        case ErrorKind::unsupported: return "unsupported";
        case ErrorKind::io: return "i/o error";
        case ErrorKind::config: return "config error";
    }
    return "error";
}

}  // namespace fracctl
