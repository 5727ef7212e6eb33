#!/usr/bin/env python
# coding=utf-8

"""
Storage of experiment results: CSV tables and JSON documents, both prefixed with the
metadata that identifies the run (config hash, version, tolerances).
"""

import csv
import io
import json
import logging
import os

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
METADATA_PREFIX = "# "


def format_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    if value is None:
        return ""
    return str(value)


class ResultStore(object):
    """
    This class is responsible for writing and reading the result files of one output directory.
    """

    def __init__(self, output_dir, metadata=None):
        self.output_dir = output_dir
        self.metadata = metadata or {}

    def path(self, name):
        return os.path.join(self.output_dir, name)

    def metadata_lines(self):
        return [METADATA_PREFIX + key + "=" + format_cell(self.metadata[key]) for key in sorted(self.metadata)]

    def write_table(self, name, fields, rows):
        """
        Writes rows (lists ordered like fields) as CSV after the metadata lines.

        :return: The path of the written file.
        """
        if not os.path.isdir(self.output_dir):
            os.makedirs(self.output_dir)

        buf = io.StringIO()
        for line in self.metadata_lines():
            buf.write(line + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])

        path = self.path(name)
        with open(path, 'w', newline='') as stream:
            stream.write(buf.getvalue())
        logger.info("wrote %d rows to %s", len(rows), path)
        return path

    def write_json(self, name, document):
        if not os.path.isdir(self.output_dir):
            os.makedirs(self.output_dir)

        payload = {"metadata": self.metadata, "data": document}
        path = self.path(name)
        with open(path, 'w') as stream:
            json.dump(payload, stream, sort_keys=True, indent=1)
            stream.write("\n")
        logger.info("wrote %s", path)
        return path


def read_table(path):
    """
    :return: A tuple (metadata dict, list of row dicts keyed by the header).
    """
    metadata = {}
    lines = []
    with open(path, 'r', newline='') as stream:
        for line in stream:
            if line.startswith(METADATA_PREFIX):
                key, _, value = line[len(METADATA_PREFIX):].rstrip("\n").partition("=")
                metadata[key] = value
            else:
                lines.append(line)

    rows = list(csv.DictReader(lines))
    return metadata, rows


def read_json(path):
    with open(path, 'r') as stream:
        payload = json.load(stream)
    return payload["metadata"], payload["data"]
