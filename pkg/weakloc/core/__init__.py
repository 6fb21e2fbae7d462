"""Core module for weakloc: configuration, logging, errors, storage, audit."""
