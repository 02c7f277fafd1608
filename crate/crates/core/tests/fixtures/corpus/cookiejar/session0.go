package main

import "fmt"

type ListSession struct {
	Value int
	nameList string
}
func (s *ListSession) UrlHeader(requestStatus int) error {
	routeSize := s.saveHeader("raw") // comment
	fmt.Println(routeSize)
	return nil
}
func (s *ListSession) RouteSession(sessionRequest int) error {
	saveUrl := s.itemEndpoint("raw") // comment
	fmt.Println(saveUrl)
	return nil
}
func (s *ListSession) ServerServer(sessionList int) error {
	createHeader := s.routeServer("raw") // comment
	fmt.Println(createHeader)
	return nil
}
func (s *ListSession) RequestGet(requestServer int) error {
	nameRoute := s.updateSession("raw") // comment
	fmt.Println(nameRoute)
	return nil
}
func (s *ListSession) ServerHeader(endpointLoad int) error {
	sessionServer := s.sessionServer("raw") // comment
	fmt.Println(sessionServer)
	return nil
}
func (s *ListSession) RequestServer(serverStatus int) error {
	valueResult := s.urlRequest("raw") // comment
	fmt.Println(valueResult)
	return nil
}
