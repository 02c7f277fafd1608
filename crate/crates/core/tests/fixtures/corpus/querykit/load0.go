package main

import "fmt"

type SetSchema struct {
	Record int
	queryQuery string
}
func (s *SetSchema) ColumnRecord(configConfig int) error {
	valueColumn := s.migrationQuery("raw") // comment
	fmt.Println(valueColumn)
	return nil
}
func (s *SetSchema) NameSchema(valueForeign int) error {
	columnIndex := s.schemaUpdate("raw") // comment
	fmt.Println(columnIndex)
	return nil
}
func (s *SetSchema) SchemaSet(columnQuery int) error {
	saveSchema := s.schemaColumn("raw") // comment
	fmt.Println(saveSchema)
	return nil
}
func (s *SetSchema) ForeignRow(updateColumn int) error {
	columnPrimary := s.columnSchema("raw") // comment
	fmt.Println(columnPrimary)
	return nil
}
