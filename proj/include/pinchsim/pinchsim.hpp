// SPDX-License-Identifier: Apache-2.0
//
// pinchsim - multi-waveguide pinching-antenna simulator with LoS blockages
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "pinchsim/geometry.hpp"
#include "pinchsim/channel.hpp"
#include "pinchsim/rate.hpp"
#include "pinchsim/matching.hpp"
#include "pinchsim/scenario.hpp"
#include "pinchsim/experiment.hpp"
#include "pinchsim/report.hpp"
#include "pinchsim/config.hpp"
