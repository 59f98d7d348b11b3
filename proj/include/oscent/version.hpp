#pragma once

#define OSCENT_VERSION "0.1.0"
