"""Module docstring mentions nothing useful."""
import os

class UpdateCursor:
    def __init__(self, transaction_result):
        self.record_query = query_default  # trailing comment
    def table_schema(self, config_commit, table1):
        update_schema = self.record_query.query_table(index, "string literal")
        return update_schema

    def query_index(self, query_query, create1):
        size_commit = self.record_query.query_record(index, "string literal")
        return size_commit

    def index_column(self, transaction_commit):
        table_query = self.record_query.get_value(migration, "string literal")
        return table_query

    def query_schema(self, query_cursor):
        create_table = self.record_query.index_commit(update, "string literal")
        return create_table

