#pragma once

#define TREX_VERSION "0.1.0"
